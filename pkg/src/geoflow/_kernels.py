"""Compiled float-mode orbit loops.

All loops share one step rule, the alpha-Rosen map

    x -> |1/x| - lam * floor(|1/(lam x)| + 1 - alpha)

which is the alpha-continued fraction map when ``lam == 1``.  Each loop
returns the index it reached so callers can detect a collapse onto 0
(|x| below ``floor``) and restart.
"""

import math

import numpy as np
from numba import njit

ZERO_FLOOR = 1e-15


@njit(cache=True, nogil=True)
def _step(alpha, lam, x):
    lo = lam * (alpha - 1.0)
    hi = lam * alpha
    u = abs(1.0 / x)
    d = math.floor(u / lam + 1.0 - alpha)
    xn = u - lam * d
    # rounding can push the image one branch over
    if xn >= hi:
        xn -= lam
        d += 1
    elif xn < lo:
        xn += lam
        d -= 1
    return xn, d


@njit(cache=True, nogil=True)
def rokhlin_batches(alpha, lam, x, start, stop, batch, sums, floor):
    """Accumulate -2 log|x_k| into ``sums[k // batch]`` for k in [start, stop)."""
    nb = sums.shape[0]
    for k in range(start, stop):
        if abs(x) < floor:
            return k, x
        b = k // batch
        if b >= nb:
            b = nb - 1
        sums[b] += -2.0 * math.log(abs(x))
        x, _ = _step(alpha, lam, x)
    return stop, x


@njit(cache=True, nogil=True)
def section_batches(alpha, lam, x, y, sigma, start, stop, batch, sums, floor):
    """Iterate the return map on (x, y, sigma); accumulate return times.

    Returns the reached index, the final state and the number of sheet flips.
    """
    nb = sums.shape[0]
    flips = 0
    for k in range(start, stop):
        if abs(x) < floor:
            return k, x, y, sigma, flips
        b = k // batch
        if b >= nb:
            b = nb - 1
        sums[b] += -2.0 * math.log(abs(x))
        eps = 1.0 if x >= 0 else -1.0
        xn, _ = _step(alpha, lam, x)
        y = eps * x * (1.0 - x * y)
        if eps > 0:
            sigma = -sigma
            flips += 1
        x = xn
    return stop, x, y, sigma, flips


@njit(cache=True, nogil=True)
def planar_orbit(alpha, lam, x, y, n, mode, floor):
    """First ``n`` iterates of (x, y); mode 0 planar, 1 sigma (Lebesgue) model."""
    xs = np.empty(n)
    ys = np.empty(n)
    for k in range(n):
        if abs(x) < floor:
            return xs[:k], ys[:k]
        eps = 1.0 if x >= 0 else -1.0
        xn, d = _step(alpha, lam, x)
        if mode == 0:
            y = 1.0 / (lam * d + eps * y)
        else:
            y = eps * x * (1.0 - x * y)
        x = xn
        xs[k] = x
        ys[k] = y
    return xs, ys


@njit(cache=True, nogil=True)
def planar_raster(alpha, lam, x, y, n, burn, mode, x0, x1, y0, y1, counts, floor):
    """Bin iterates burn+1 .. burn+n of (x, y) into ``counts[row, col]``.

    Row 0 is the lowest y.  Returns (steps reached, overflow count).
    """
    ny, nx = counts.shape
    sx = nx / (x1 - x0)
    sy = ny / (y1 - y0)
    overflow = 0
    for k in range(n + burn):
        if abs(x) < floor:
            return k, overflow
        eps = 1.0 if x >= 0 else -1.0
        xn, d = _step(alpha, lam, x)
        if mode == 0:
            y = 1.0 / (lam * d + eps * y)
        else:
            y = eps * x * (1.0 - x * y)
        x = xn
        if k < burn:
            continue
        if x < x0 or x > x1 or y < y0 or y > y1:
            overflow += 1
            continue
        i = int((x - x0) * sx)
        j = int((y - y0) * sy)
        if i >= nx:
            i = nx - 1
        if j >= ny:
            j = ny - 1
        counts[j, i] += 1
    return n + burn, overflow


@njit(cache=True, nogil=True)
def variant_orbit(kind, alpha, x, y, n, floor):
    """Iterates of the determinant-signed variants; kind +1 or -1."""
    xs = np.empty(n)
    ys = np.empty(n)
    for k in range(n):
        if abs(x) < floor:
            return xs[:k], ys[:k]
        u = -1.0 / x if kind > 0 else 1.0 / x
        d = math.floor(u + 1.0 - alpha)
        xn = u - d
        if xn >= alpha:
            xn -= 1.0
            d += 1
        elif xn < alpha - 1.0:
            xn += 1.0
            d -= 1
        if kind > 0:
            y = 1.0 / (d - y)
        else:
            y = 1.0 / (y + d)
        x = xn
        xs[k] = x
        ys[k] = y
    return xs, ys
