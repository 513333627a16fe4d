"""The alpha-continued fraction maps on [alpha - 1, alpha).

Every function works over exact rationals (``Fraction``/``int`` inputs) and
over floats.  In float mode a point with ``|x| < ZERO_FLOOR`` is treated as
the terminal point 0, since ``floor(1/x)`` is meaningless there.

>>> from fractions import Fraction as F
>>> step(1, F(7, 10))
Fraction(3, 7)
>>> digit(F(1, 2), F(-2, 5))
Digit(eps=-1, d=3)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from geoflow.matrix import Mat2

INFINITY = math.inf
ZERO_FLOOR = 1e-15


class DomainError(ValueError):
    """An argument lies outside the domain of the map."""


class OrbitTerminated(ArithmeticError):
    """The orbit reached the fixed point 0 (no further digits)."""

    def __init__(self, message="orbit reached x = 0", index=None):
        super().__init__(message)
        self.index = index


class DegenerateTruncation(ZeroDivisionError):
    """Back-substitution of a truncated expansion divided by zero."""


class Digit(NamedTuple):
    eps: int
    d: int | float


@dataclass(frozen=True)
class Expansion:
    """``x = d0 + eps1/(d1 + eps2/(d2 + ...))`` truncated to ``digits``."""

    d0: int
    digits: tuple[Digit, ...] = field(default_factory=tuple)
    terminated: bool = False

    def __len__(self):
        return len(self.digits)


def check_alpha(alpha) -> None:
    if not 0 < alpha <= 1:
        raise DomainError(f"alpha must lie in (0, 1], got {alpha!r}")


def _is_zero(x) -> bool:
    return x == 0 or (isinstance(x, float) and abs(x) < ZERO_FLOOR)


def in_interval(alpha, x) -> bool:
    return alpha - 1 <= x < alpha


def _check_point(alpha, x):
    check_alpha(alpha)
    if not in_interval(alpha, x):
        raise DomainError(f"x={x!r} outside [{alpha} - 1, {alpha})")


def _digit_step(alpha, x):
    """(eps, d, T(x)) for nonzero x, keeping T(x) in the half-open interval."""
    u = abs(1 / x)
    eps = 1 if x >= 0 else -1
    d = math.floor(u + 1 - alpha)
    xn = u - d
    if xn >= alpha:
        xn -= 1
        d += 1
    elif xn < alpha - 1:
        xn += 1
        d -= 1
    return eps, d, xn


def digit(alpha, x) -> Digit:
    """Sign and denominator ``(eps(x), d_alpha(x))``; ``d`` is infinite at 0."""
    _check_point(alpha, x)
    if _is_zero(x):
        return Digit(1, INFINITY)
    eps, d, _ = _digit_step(alpha, x)
    return Digit(eps, d)


def step(alpha, x):
    """One application of ``T_alpha``; 0 is a fixed point."""
    _check_point(alpha, x)
    if _is_zero(x):
        return x * 0
    return _digit_step(alpha, x)[2]


def into_interval(alpha, x):
    """Integer translate of ``x`` into [alpha - 1, alpha) and the shift used."""
    d0 = math.floor(x - alpha) + 1
    y = x - d0
    # guard against float rounding at the endpoints
    if y >= alpha:
        y, d0 = y - 1, d0 + 1
    elif y < alpha - 1:
        y, d0 = y + 1, d0 - 1
    return y, d0


def expand(alpha, x, n: int) -> Expansion:
    """First ``n`` digits of the alpha-expansion of any real ``x``.

    >>> from fractions import Fraction as F
    >>> e = expand(1, F(7, 10), 3)
    >>> e.d0, [tuple(d) for d in e.digits]
    (0, [(1, 1), (1, 2), (1, 3)])
    """
    check_alpha(alpha)
    if n < 0:
        raise ValueError("n must be non-negative")
    y, d0 = into_interval(alpha, x)
    digits = []
    terminated = False
    for _ in range(n):
        if _is_zero(y):
            terminated = True
            break
        eps, d, y = _digit_step(alpha, y)
        digits.append(Digit(eps, d))
    else:
        terminated = _is_zero(y)
    return Expansion(d0, tuple(digits), terminated)


def digit_matrix(dig: Digit) -> Mat2:
    """Matrix of ``z -> eps/(d + z)``, the inverse branch of one step."""
    return Mat2(0, dig.eps, 1, dig.d)


def convergent_matrix(digits: Sequence[Digit]) -> Mat2:
    m = Mat2.identity()
    for dig in digits:
        m = m @ digit_matrix(dig)
    return m


def reconstruct(exp: Expansion, n: int | None = None, tail=0):
    """Evaluate the expansion truncated after ``n`` digits.

    The composed digit matrices act on ``tail`` (the stand-in for
    ``T^n(x)``, 0 by default).  Exact digits with a rational ``tail`` give
    an exact ``Fraction``.
    """
    if n is None:
        n = len(exp.digits)
    if n > len(exp.digits):
        raise ValueError(f"only {len(exp.digits)} digits available, asked for {n}")
    m = convergent_matrix(exp.digits[:n])
    den = m.c * tail + m.d
    if den == 0:
        raise DegenerateTruncation(f"denominator vanishes after {n} digits")
    num = m.a * tail + m.b
    if isinstance(num, int) and isinstance(den, int):
        return exp.d0 + Fraction(num, den)
    return exp.d0 + num / den


def gauss_digit(x) -> int:
    """Regular continued fraction digit ``floor(1/x)`` for x in (0, 1)."""
    return math.floor(1 / x)
