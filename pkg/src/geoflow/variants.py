"""Determinant-signed variants of the alpha-continued fractions, and an
interval map whose natural extension is a non-first return.

Variants (both on [alpha - 1, alpha)):

* positive determinant: ``S(x) = -1/x - floor(-1/x + 1 - alpha)``; for
  alpha = 1 this is the backwards continued fraction map.
* negative determinant: ``x -> 1/x - floor(1/x + 1 - alpha)``.

Their natural extensions move y by the inverse transpose of the step's
digit matrix, exactly as for the alpha-continued fractions.  This preserves
``(1 + xy)^-2 dx dy`` for every such matrix, since the pairing
``(x, 1) . (1, y) = 1 + xy`` is invariant.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from geoflow import _kernels
from geoflow.cf import ZERO_FLOOR, DomainError, OrbitTerminated, _is_zero, check_alpha, in_interval
from geoflow.matrix import Mat2
from geoflow.natext import DEFAULT_BURN_IN, Bounds, PlanarPoint, Raster, padded_extent, planar_step, rasterize

MAX_PREFIX = 64
GOLDEN = (math.sqrt(5) - 1) / 2


class VariantKind(enum.Enum):
    POSITIVE = "positive_det"
    NEGATIVE = "negative_det"

    @classmethod
    def parse(cls, value) -> "VariantKind":
        if isinstance(value, cls):
            return value
        v = str(value).lower()
        if v in ("positive", "positive_det", "+", "+1"):
            return cls.POSITIVE
        if v in ("negative", "negative_det", "-", "-1"):
            return cls.NEGATIVE
        raise ValueError(f"unknown variant {value!r}; use 'positive' or 'negative'")

    @property
    def sign(self) -> int:
        return 1 if self is VariantKind.POSITIVE else -1


class DegenerateInput(ValueError):
    """The expansion ends before the partition index is determined."""


def _variant_digit(kind: VariantKind, alpha, x):
    u = -1 / x if kind is VariantKind.POSITIVE else 1 / x
    d = math.floor(u + 1 - alpha)
    xn = u - d
    if xn >= alpha:
        xn, d = xn - 1, d + 1
    elif xn < alpha - 1:
        xn, d = xn + 1, d - 1
    return d, xn


def _check(kind, alpha, x):
    kind = VariantKind.parse(kind)
    check_alpha(alpha)
    if not in_interval(alpha, x):
        raise DomainError(f"x={x!r} outside [{alpha} - 1, {alpha})")
    if _is_zero(x):
        raise OrbitTerminated()
    return kind


def variant_step(kind, alpha, x):
    """One step of the positive- or negative-determinant variant.

    >>> variant_step("positive", Fraction(3, 5), Fraction(1, 2))
    Fraction(0, 1)
    """
    kind = _check(kind, alpha, x)
    return _variant_digit(kind, alpha, x)[1]


def variant_digit_matrix(kind, alpha, x) -> Mat2:
    """The matrix ``P`` with ``step(x) = P . x`` (Moebius action).

    Positive: ``(-d -1; 1 0)``, det +1.  Negative: ``(-d 1; 1 0)``, det -1.
    """
    kind = _check(kind, alpha, x)
    d, _ = _variant_digit(kind, alpha, x)
    return Mat2(-d, -kind.sign, 1, 0)


def variant_planar_step(kind, alpha, p) -> PlanarPoint:
    x, y = p
    kind = _check(kind, alpha, x)
    d, xn = _variant_digit(kind, alpha, x)
    P = Mat2(-d, -kind.sign, 1, 0)
    if P.det() != kind.sign:
        raise AssertionError(f"digit matrix {P} has determinant {P.det()}, expected {kind.sign}")
    return PlanarPoint(xn, P.inverse_transpose().act(y))


def variant_orbit_array(kind, alpha, seed_point, n: int):
    kind = VariantKind.parse(kind)
    x, y = (float(v) for v in seed_point)
    return _kernels.variant_orbit(kind.sign, float(alpha), x, y, int(n), ZERO_FLOOR)


def variant_raster(kind, alpha, seed_point, n: int, nx: int = 512, ny: int | None = None,
                   bounds=None, burn_in: int = DEFAULT_BURN_IN, seed=None) -> Raster:
    """Raster of ``n`` iterates after ``burn_in``; y-range from the orbit padded 5%."""
    ny = nx if ny is None else ny
    xs, ys = variant_orbit_array(kind, alpha, seed_point, n + burn_in)
    xs, ys = xs[burn_in:], ys[burn_in:]
    if xs.size == 0:
        raise OrbitTerminated("orbit terminated during burn-in")
    if bounds is None:
        bounds = Bounds(float(alpha) - 1, float(alpha), *padded_extent(ys.min(), ys.max()))
    r = rasterize((xs, ys), nx, ny, bounds)
    r.seed = seed
    r.meta = {"n": int(n), "burn_in": int(burn_in), "mode": VariantKind.parse(kind).value,
              "reached": int(xs.size + burn_in)}
    return r


# ---------------------------------------------------------------------------
# Fibonacci matrices and strips
# ---------------------------------------------------------------------------

N1 = Mat2(0, 1, 1, 1)


def fib(j: int) -> int:
    if j < 0:
        raise ValueError("Fibonacci index must be non-negative")
    a, b = 0, 1
    for _ in range(j):
        a, b = b, a + b
    return a


def fib_matrix_power(j: int) -> Mat2:
    """``N1^j`` by repeated multiplication; equals ``(f_{j-1} f_j; f_j f_{j+1})``."""
    if j < 1:
        raise ValueError("power must be at least 1")
    m = N1
    for _ in range(j - 1):
        m = m @ N1
    return m


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_open: bool = True
    hi_open: bool = False

    def __contains__(self, v) -> bool:
        above = v > self.lo if self.lo_open else v >= self.lo
        below = v < self.hi if self.hi_open else v <= self.hi
        return above and below

    @property
    def length(self):
        return self.hi - self.lo

    def disjoint(self, other: "Interval") -> bool:
        a, b = (self, other) if self.lo <= other.lo else (other, self)
        if a.hi < b.lo:
            return True
        if a.hi == b.lo:
            return a.hi_open or b.lo_open
        return False


def strip(n: int) -> Interval:
    """y-interval of the n-th strip of the tower over [0, 1/2), n >= 2.

    Even n: (f_{n-2}/f_{n-1}, f_n/f_{n+1}]; odd n: (f_n/f_{n+1}, f_{n-2}/f_{n-1}].
    """
    if n < 2:
        raise ValueError("strips are indexed from n = 2")
    a = Fraction(fib(n - 2), fib(n - 1))
    b = Fraction(fib(n), fib(n + 1))
    return Interval(a, b) if n % 2 == 0 else Interval(b, a)


# ---------------------------------------------------------------------------
# the map g and its natural extension G
# ---------------------------------------------------------------------------

def _gauss(x):
    d = math.floor(1 / x)
    xn = 1 / x - d
    if xn >= 1:
        xn, d = xn - 1, d + 1
    elif xn < 0:
        xn, d = xn + 1, d - 1
    return d, xn


def partition_index(x) -> int:
    """Index n of the partition set A_n containing ``x``.

    A_1 is the cylinder [1]; A_n (n >= 2) collects the cylinders
    [k, 1, ..., 1, l] with n - 2 ones and k, l > 1.
    """
    if not 0 < x < 1:
        raise DomainError(f"x must lie in (0, 1), got {x!r}")
    d, y = _gauss(x)
    if d == 1:
        return 1
    ones = 0
    for _ in range(MAX_PREFIX - 1):
        if _is_zero(y):
            raise DegenerateInput(f"expansion of {x!r} ends before the partition index is known")
        d, y = _gauss(y)
        if d > 1:
            return 2 + ones
        ones += 1
    raise DegenerateInput(f"no digit > 1 among the first {MAX_PREFIX} digits of {x!r}")


def g_step(x):
    """``g(x) = T^n(x)`` on A_n; returns ``(g(x), n)``.

    >>> g_step(Fraction(5, 12))
    (Fraction(1, 2), 2)
    """
    n = partition_index(x)
    y = x
    for _ in range(n):
        y = _gauss(y)[1]
    return y, n


def tower_level(p):
    """``(n, T^{n-1}(p))`` for ``p`` over A_n: the point lifted to the top of its tower."""
    n = partition_index(p[0])
    q = PlanarPoint(*p)
    for _ in range(n - 1):
        q = planar_step(1, q)
    return n, q


def G_step(p) -> PlanarPoint:
    """The n-fold planar Gauss extension on the set over A_n."""
    n, q = tower_level(p)
    return planar_step(1, q)


def G_step_array(xs: np.ndarray, ys: np.ndarray):
    """Vectorised-by-loop ``G_step`` on floats; returns (x', y', n)."""
    out = np.empty((3, xs.size))
    for i, (x, y) in enumerate(zip(xs.tolist(), ys.tolist())):
        n, q = tower_level((x, y))
        q = planar_step(1, q)
        out[:, i] = q.x, q.y, n
    return out[0], out[1], out[2].astype(np.int64)
