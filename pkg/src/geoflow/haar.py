"""Coordinate charts on SL2(R), Haar densities and the Liouville volume.

On matrices ``(alpha beta; gamma delta)`` with ``gamma != 0`` the entries
``(alpha, gamma, delta)`` are coordinates, and ``d alpha d gamma d delta /
|gamma|`` is a Haar measure.  We fix the constant so that

    dh = 2 d alpha d gamma d delta / |gamma|,

which makes ``dx dy dt`` of the flow-box chart ``(x xy-1; 1 y) g_t`` exactly
Haar.  With this normalization the volume of the unit tangent bundle of the
modular surface is pi^2/3.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np

from geoflow.matrix import Mat2
from geoflow.natext import Estimate

HAAR_SCALE = 2.0
FD_STEP = 1e-5
FD_RTOL = 1e-5
SINGULAR_MARGIN = 1e-3


class ChartDomainError(ValueError):
    """A point lies outside a chart or too close to its singular locus."""


class ChartRetry(ChartDomainError):
    """The image of a sample left the chart; draw another sample."""


class ChartXYT(NamedTuple):
    x: float
    y: float
    t: float


class ChartXYcap(NamedTuple):
    X: float
    Y: float
    t: float


class JacobianCheck(NamedTuple):
    claimed: float
    numeric: float
    ok: bool


def chart_xyt_to_matrix(c) -> Mat2:
    """``(x xy-1; 1 y) g_t``; determinant one."""
    x, y, t = c
    s = math.exp(t / 2)
    return Mat2(x * s, (x * y - 1) / s, s, y / s)


def matrix_to_chart_xyt(M: Mat2) -> ChartXYT:
    if not M.c > 0:
        raise ChartDomainError(f"chart needs lower-left entry > 0, got {M.c!r}")
    s = M.c
    return ChartXYT(float(M.a / s), float(M.d * s), 2.0 * math.log(s))


def chart_XYt_to_matrix(c) -> Mat2:
    """Modified horizontal chart; needs ``Y > 0`` and ``1 + XY > 0``."""
    X, Y, t = c
    if Y <= 0 or 1 + X * Y <= 0:
        raise ChartDomainError("chart needs Y > 0 and 1 + XY > 0")
    s = math.sqrt((1 + X * Y) / Y)
    e = math.exp(t / 2)
    return Mat2(X * e / s, -1 / (e * Y * s), e / s, 1 / (e * s))


def matrix_to_chart_XYt(M: Mat2) -> ChartXYcap:
    a, b, c, d = (float(v) for v in M.entries())
    if c * d <= 0:
        raise ChartDomainError("chart needs gamma and delta of the same sign")
    if c < 0:
        a, b, c, d = -a, -b, -c, -d
    return ChartXYcap(a / c, -d / b, math.log(c / d))


def chart_horizontal_to_matrix(c, side: int = +1) -> Mat2:
    """Horizontal-vector chart (gamma = delta before flowing) with ``X > Y``.

    ``side=-1`` gives the left-pointing component (gamma = -delta), obtained
    by right multiplication with the rotation (0 -1; 1 0).
    """
    X, Y, t = c
    if X <= Y:
        raise ChartDomainError("chart needs X > Y")
    s = math.sqrt(X - Y)
    e = math.exp(t / 2)
    M = Mat2(X * e / s, Y / (e * s), e / s, 1 / (e * s))
    if side == -1:
        M = M @ Mat2(0, -1, 1, 0)
    return M


def haar_density_agd(M: Mat2) -> float:
    """Density of Haar measure with respect to d alpha d gamma d delta."""
    return HAAR_SCALE / abs(float(M.c))


def _fd_jacobian(f: Callable, p, h: float = FD_STEP) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    cols = []
    for i in range(p.size):
        e = np.zeros_like(p)
        e[i] = h
        cols.append((np.asarray(f(p + e), float) - np.asarray(f(p - e), float)) / (2 * h))
    return np.column_stack(cols)


def _agd(M: Mat2):
    return (M.a, M.c, M.d)


def _from_agd(p) -> Mat2:
    a, c, d = p
    return Mat2(a, (a * d - 1) / c, c, d)


def _haar_in_chart(to_matrix, p) -> float:
    J = _fd_jacobian(lambda q: _agd(to_matrix(q)), p)
    return abs(np.linalg.det(J)) * haar_density_agd(to_matrix(p))


def _near(v, what):
    if abs(v) < SINGULAR_MARGIN:
        raise ChartDomainError(f"point within {SINGULAR_MARGIN} of the singular locus {what}")


def _claim_xyt(p):
    x, y, t = p
    J = _fd_jacobian(lambda q: _agd(chart_xyt_to_matrix(q)), p)
    return math.exp(t / 2) / 2, abs(np.linalg.det(J))


def _claim_adgD(p):
    a, D, c, d = p
    _near(c, "gamma = 0")
    J = _fd_jacobian(lambda q: (q[0], (q[0] * q[3] - q[1]) / q[2], q[2], q[3]), p)
    return 1 / abs(c), abs(np.linalg.det(J))


def _claim_XYt(p):
    X, Y, t = p
    _near(Y, "Y = 0")
    _near(1 + X * Y, "1 + XY = 0")
    return 1 / (1 + X * Y) ** 2, _haar_in_chart(chart_XYt_to_matrix, p)


def _claim_horizontal(side):
    def claim(p):
        X, Y, t = p
        _near(X - Y, "X = Y")
        f = lambda q: chart_horizontal_to_matrix(q, side)
        return 1 / (X - Y) ** 2, _haar_in_chart(f, p)
    return claim


def _alternative(drop):
    """Haar density ``1/|e|`` in the coordinates left after dropping one entry.

    Checked against ``1/|gamma|`` through the transition Jacobian from
    ``(alpha, gamma, delta)``.  Point: (alpha, gamma, delta).
    """
    keep = {"beta": (0, 1, 3), "alpha": (1, 2, 3), "delta": (0, 1, 2)}[drop]
    denom = {"beta": 1, "alpha": 3, "delta": 0}[drop]

    def claim(p):
        _near(p[1], "gamma = 0")
        M = _from_agd(p)
        _near(M.entries()[denom], f"{drop} = 0")
        J = _fd_jacobian(lambda q: [_from_agd(q).entries()[i] for i in keep], p)
        return 1 / abs(p[1]), abs(np.linalg.det(J)) / abs(M.entries()[denom])
    return claim


CHARTS = {
    "xyt": _claim_xyt,
    "adgD": _claim_adgD,
    "XYt": _claim_XYt,
    "horizontal": _claim_horizontal(+1),
    "horizontal_left": _claim_horizontal(-1),
    "alt_beta": _alternative("beta"),
    "alt_alpha": _alternative("alpha"),
    "alt_delta": _alternative("delta"),
}


def jacobian_validate(chart: str, point, rtol: float = FD_RTOL) -> JacobianCheck:
    """Compare a chart's claimed density with a finite-difference Jacobian.

    >>> jacobian_validate("XYt", (1.0, 0.5, 0.0)).claimed
    0.4444444444444444
    """
    try:
        claim = CHARTS[chart]
    except KeyError:
        raise ValueError(f"unknown chart {chart!r}; choose from {sorted(CHARTS)}") from None
    claimed, numeric = claim(tuple(float(v) for v in point))
    ok = abs(numeric - claimed) <= rtol * abs(claimed)
    return JacobianCheck(claimed, numeric, bool(ok))


def left_invariance_ratio(M: Mat2, point) -> float:
    """Jacobian of ``A -> M A`` in (alpha, gamma, delta) times the density ratio."""
    p = tuple(float(v) for v in point)
    _near(p[1], "gamma = 0")
    image = M.to_float() @ _from_agd(p)
    if abs(image.c) < SINGULAR_MARGIN:
        raise ChartRetry("left translate is too close to gamma = 0")
    J = _fd_jacobian(lambda q: _agd(M.to_float() @ _from_agd(q)), p)
    return abs(np.linalg.det(J)) * abs(p[1]) / abs(image.c)


def left_invariance_check(M: Mat2, point, rtol: float = FD_RTOL) -> bool:
    if abs(float(M.det()) - 1) > 1e-12:
        raise ValueError("left translation needs det M = 1")
    return abs(left_invariance_ratio(M, point) - 1) <= rtol


def sample_chart_point(chart: str, rng: np.random.Generator):
    """A random point of ``chart`` at least SINGULAR_MARGIN from its singular loci."""
    while True:
        if chart == "xyt":
            p = (rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2))
        elif chart == "adgD":
            p = (rng.uniform(-2, 2), rng.uniform(0.5, 1.5), rng.uniform(-2, 2), rng.uniform(-2, 2))
            if abs(p[2]) < 0.1:
                continue
        elif chart == "XYt":
            p = (rng.uniform(-1, 2), rng.uniform(0.1, 2), rng.uniform(-2, 2))
            if 1 + p[0] * p[1] < 0.1:
                continue
        elif chart in ("horizontal", "horizontal_left"):
            Y = rng.uniform(-2, 2)
            p = (Y + rng.uniform(0.1, 2), Y, rng.uniform(-2, 2))
        elif chart.startswith("alt_"):
            p = sample_agd(rng)
            M = _from_agd(p)
            if min(abs(M.a), abs(M.b), abs(M.d)) < 0.1:
                continue
        else:
            raise ValueError(f"unknown chart {chart!r}")
        return p


def sample_agd(rng: np.random.Generator):
    """(alpha, gamma, delta) with |gamma| >= 0.1."""
    while True:
        p = (rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(p[1]) >= 0.1:
            return p


def random_sl2(rng: np.random.Generator, scale: float = 1.5) -> Mat2:
    """A random determinant-one matrix with moderate entries."""
    a, b, c = rng.uniform(-scale, scale, 3)
    while abs(a) < 0.1:
        a = rng.uniform(-scale, scale)
    return Mat2(a, b, c, (1 + b * c) / a)


# ---------------------------------------------------------------------------
# Liouville volume
# ---------------------------------------------------------------------------

def liouville_integrand(x, y=None):
    """Return time ``-2 log x``, the integrand over the Gauss fundamental domain."""
    return -2.0 * np.log(x)


def inner_integral(x):
    """Closed form of the y-integral: ``-2 log x / (1 + x)``."""
    return -2.0 * np.log(x) / (1.0 + x)


def _panels(resolution: int) -> np.ndarray:
    # uniform panels on [2^-6, 1] plus dyadic panels graded toward the log singularity at 0
    grade = 2.0 ** -np.arange(6, 60)
    uniform = np.linspace(2.0 ** -6, 1.0, resolution + 1)
    return np.concatenate([[0.0], grade[::-1], uniform])


def _volume(resolution: int, order: int = 8) -> float:
    u, w = np.polynomial.legendre.leggauss(order)
    v, wv = np.polynomial.legendre.leggauss(4)
    edges = _panels(resolution)
    a, b = edges[:-1, None], edges[1:, None]
    x = (a + b) / 2 + (b - a) / 2 * u
    wx = (b - a) / 2 * w
    top = 1.0 / (1.0 + x)
    # inner Gauss-Legendre in y over [0, 1/(1+x)]
    ys = top[..., None] / 2 * (1 + v)
    inner = (top[..., None] / 2 * wv * liouville_integrand(x[..., None], ys)).sum(axis=-1)
    # pairwise summation in a fixed order
    return 2.0 * float(np.sum(wx * inner))


def liouville_volume(resolution: int = 1024) -> Estimate:
    """Volume of the unit tangent bundle of the modular surface as a 2-D quadrature.

    The section is the double cover of ``{0 <= x <= 1, 0 <= y <= 1/(1+x)}``
    and the fibre over (x, y) has length ``-2 log x``.  The error bar is the
    change from half the resolution.
    """
    if resolution < 16:
        raise ValueError("resolution must be at least 16 panels")
    full = _volume(resolution)
    half = _volume(resolution // 2)
    return Estimate(full, abs(full - half), resolution, None, "gauss-legendre")
