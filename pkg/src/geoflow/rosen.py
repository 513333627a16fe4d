"""Rosen and alpha-Rosen continued fractions for the Hecke triangle groups.

``G_q`` is generated by ``z -> z + lambda_q`` and ``z -> -1/z`` with
``lambda_q = 2 cos(pi/q)``.  The alpha-Rosen map on ``[lambda(alpha-1),
lambda alpha)`` is

    x -> |1/x| - lambda * floor(|1/(lambda x)| + 1 - alpha),

the Rosen map being ``alpha = 1/2``.  For ``q = 3`` (``lambda = 1``) these are
the alpha-continued fractions.  Exact arithmetic is available when
``lambda^2`` is an integer, i.e. for q = 3, 4, 6.
"""

from __future__ import annotations

import math
import warnings
from fractions import Fraction
from typing import NamedTuple

from geoflow.cf import DomainError, OrbitTerminated, _is_zero
from geoflow.ergodic import EntropyReport, entropy_area_report
from geoflow.matrix import Mat2
from geoflow.natext import DEFAULT_BURN_IN
from geoflow.quadratic import QuadraticNumber
from geoflow.section import FLOAT_RTOL, FlowIdentity, SectionPoint, _check_sigma, check_flow_identity

HALF = Fraction(1, 2)


class AlphaRangeWarning(UserWarning):
    """The (q, alpha) pair may lie outside the range where the cross-section is proved."""


class RosenDigit(NamedTuple):
    eps: int
    d: int


class HeckeIndex:
    """The index ``q >= 3`` of a Hecke triangle group."""

    def __init__(self, q: int):
        if int(q) != q or q < 3:
            raise DomainError(f"Hecke index must be an integer >= 3, got {q!r}")
        self.q = int(q)

    @property
    def lam(self) -> float:
        return hecke_lambda(self.q)

    @property
    def exact_lam(self):
        """``lambda_q`` as an exact number for q in {3, 4, 6}, else a float."""
        return {3: 1, 4: QuadraticNumber.sqrt(2), 6: QuadraticNumber.sqrt(3)}.get(self.q, self.lam)

    @property
    def is_exact(self) -> bool:
        return self.q in (3, 4, 6)

    def __repr__(self):
        return f"HeckeIndex({self.q})"

    def __eq__(self, other):
        return isinstance(other, HeckeIndex) and other.q == self.q

    def __hash__(self):
        return hash(("HeckeIndex", self.q))


def _index(h) -> HeckeIndex:
    return h if isinstance(h, HeckeIndex) else HeckeIndex(h)


def hecke_lambda(q: int) -> float:
    if int(q) != q or q < 3:
        raise DomainError(f"Hecke index must be an integer >= 3, got {q!r}")
    if q == 3:
        return 1.0
    return 2.0 * math.cos(math.pi / q)


def _lam_for(h: HeckeIndex, x):
    """Exact lambda when ``x`` is exact and the field is available, else float."""
    if isinstance(x, float):
        return h.lam
    if h.is_exact:
        return h.exact_lam
    raise TypeError(f"exact arithmetic for q={h.q} is not available; pass a float")


def rosen_interval(h, alpha=HALF):
    h = _index(h)
    lam = h.lam
    return lam * (float(alpha) - 1), lam * float(alpha)


def _rosen_digit_step(lam, alpha, x):
    u = abs(1 / x)
    eps = 1 if x >= 0 else -1
    d = math.floor(u / lam + 1 - alpha)
    xn = u - lam * d
    lo, hi = lam * (alpha - 1), lam * alpha
    if xn >= hi:
        xn, d = xn - lam, d + 1
    elif xn < lo:
        xn, d = xn + lam, d - 1
    return eps, d, xn


def _check_alpha_rosen(h: HeckeIndex, alpha):
    if not 0 <= alpha <= 1 / h.lam + 1e-15:
        raise DomainError(f"alpha must lie in [0, 1/lambda_{h.q}], got {alpha!r}")


def alpha_rosen_step(h, alpha, x):
    """One step of the alpha-Rosen map and its digit ``(eps, d)``.

    >>> alpha_rosen_step(3, Fraction(1, 2), Fraction(-2, 5))
    (Fraction(-1, 2), RosenDigit(eps=-1, d=3))
    """
    h = _index(h)
    _check_alpha_rosen(h, alpha)
    lam = _lam_for(h, x)
    if not lam * (alpha - 1) <= x < lam * alpha:
        raise DomainError(f"x={x!r} outside [lambda(alpha-1), lambda alpha) for q={h.q}")
    if _is_zero(x):
        raise OrbitTerminated()
    eps, d, xn = _rosen_digit_step(lam, alpha, x)
    return xn, RosenDigit(eps, d)


def rosen_step(h, x):
    """The Rosen map ``|1/x| - lambda floor(|1/(lambda x)| + 1/2)``."""
    alpha = 0.5 if isinstance(x, float) else HALF
    return alpha_rosen_step(h, alpha, x)


def hecke_generators(h) -> tuple[Mat2, Mat2]:
    """``T = (1 lambda; 0 1)`` and ``S = (0 -1; 1 0)``."""
    h = _index(h)
    return Mat2(1, h.exact_lam, 0, 1), Mat2(0, -1, 1, 0)


def rosen_digit_matrix(h, dig: RosenDigit) -> Mat2:
    lam = _index(h).exact_lam
    return Mat2(0, dig.eps, 1, lam * dig.d)


def rosen_phi_step(h, alpha, p) -> SectionPoint:
    x, y, sigma = p
    _check_sigma(sigma)
    xn, dig = alpha_rosen_step(h, alpha, x)
    return SectionPoint(xn, dig.eps * x * (1 - x * y), -dig.eps * sigma)


def rosen_flow_verify(h, alpha, p, rtol: float | None = None, strict: bool = False) -> FlowIdentity:
    """Flow identity with the left multiplier's ``d`` replaced by ``lambda d``.

    Exact (over Q(lambda)) for exact inputs with q in {3, 4, 6}; otherwise
    entrywise to ``FLOAT_RTOL``.
    """
    h = _index(h)
    x, y, sigma = p
    _check_sigma(sigma)
    xn, dig = alpha_rosen_step(h, alpha, x)
    lam = _lam_for(h, x)
    if rtol is None:
        rtol = FLOAT_RTOL if isinstance(x, float) or isinstance(y, float) else 0.0
    return check_flow_identity(SectionPoint(x, y, sigma), dig.eps, lam * dig.d, xn, rtol, strict)


def unit_tangent_volume(q: int) -> float:
    """``pi^2 (1 - 2/q)``: hyperbolic area pi(1 - 2/q) times the fibre length pi."""
    return math.pi ** 2 * (1 - 2 / _index(q).q)


def hecke_entropy_report(h, alpha=0.5, n: int = 1_000_000, resolution: int = 512,
                         seed: int = 42, burn_in: int = DEFAULT_BURN_IN) -> EntropyReport:
    """Entropy and mu-area of the (alpha-)Rosen natural extension.

    The product is compared with half the unit tangent volume of
    ``G_q \\ H``.  The lower end alpha_0(q) of the proved alpha-range is not
    encoded, so any alpha other than 1/2 triggers :class:`AlphaRangeWarning`.
    """
    h = _index(h)
    _check_alpha_rosen(h, alpha)
    if float(alpha) != 0.5:
        warnings.warn(f"alpha={alpha} for q={h.q}: the cross-section is only proved for "
                      "alpha in [alpha_0(q), 1/lambda_q], and alpha_0(q) is not encoded",
                      AlphaRangeWarning, stacklevel=2)
    target = unit_tangent_volume(h.q) / 2
    rep = entropy_area_report(float(alpha), n, resolution, seed, burn_in, lam=h.lam, target=target)
    rep.extras = {"q": h.q, "lambda": h.lam, **rep.extras}
    return rep
