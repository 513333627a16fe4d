"""The two-sheeted cross-section of the geodesic flow on the modular surface.

A section point ``(x, y, sigma)`` (with ``(x, y)`` in the Lebesgue model
``Sigma_alpha``) is lifted to a matrix ``A_sigma(x, y)`` of determinant one.
Flowing for time ``-2 log|x|`` and changing the PSL2(Z) representative by an
integer matrix ``M`` yields the lift of the image under the return map

    Phi(x, y, sigma) = (T(x), eps(x) x (1 - xy), -eps(x) sigma).
"""

from __future__ import annotations

import math
from typing import NamedTuple

from geoflow.cf import DomainError, OrbitTerminated, _check_point, _digit_step, _is_zero
from geoflow.matrix import Mat2, SingularityError, equal_pm
from geoflow.natext import PlanarPoint, inverse_Z

FLOAT_RTOL = 1e-9


class SectionPoint(NamedTuple):
    x: object
    y: object
    sigma: int


class InfiniteReturnTime(ArithmeticError):
    """x = 0: the geodesic never returns."""


class FlowIdentityViolation(AssertionError):
    pass


class FlowIdentity(NamedTuple):
    multiplier: Mat2
    target: SectionPoint
    ok: bool


def _check_sigma(sigma):
    if sigma not in (-1, 1):
        raise ValueError(f"sigma must be -1 or +1, got {sigma!r}")


def lift(p) -> Mat2:
    """``A_{-1} = (1 y; -x 1-xy)`` and ``A_{+1} = (x 1-xy; -1 y)``."""
    x, y, sigma = p
    _check_sigma(sigma)
    if sigma == -1:
        return Mat2(1, y, -x, 1 - x * y)
    return Mat2(x, 1 - x * y, -1, y)


def geodesic(t) -> Mat2:
    """``g_t = diag(e^{t/2}, e^{-t/2})``."""
    s = math.exp(t / 2)
    return Mat2(s, 0.0, 0.0, 1 / s)


def flow(M: Mat2, t) -> Mat2:
    return M @ geodesic(t)


def flow_scaled(M: Mat2, s) -> Mat2:
    """``M g_t`` given ``s = e^{t/2}``; exact when ``s`` is rational."""
    return M @ Mat2(s, 0, 0, 1 / s)


def return_time(x) -> float:
    """Hyperbolic length ``-2 log|x|`` flowed between consecutive returns."""
    if x == 0:
        raise InfiniteReturnTime("x = 0 never returns to the section")
    if abs(x) >= 1:
        raise DomainError(f"return time needs 0 < |x| < 1, got {x!r}")
    return -2.0 * math.log(abs(float(x)))


def phi_step(alpha, p) -> SectionPoint:
    x, y, sigma = p
    _check_sigma(sigma)
    _check_point(alpha, x)
    if _is_zero(x):
        raise OrbitTerminated()
    eps, _, xn = _digit_step(alpha, x)
    return SectionPoint(xn, eps * x * (1 - x * y), -eps * sigma)


def project(p) -> PlanarPoint:
    """Two-to-one projection of the section onto ``Omega_alpha``.

    Forgets the sheet and undoes the Lebesgue change of variables, so that
    it intertwines ``phi_step`` with the planar natural extension.
    """
    x, y, _ = p
    try:
        return inverse_Z((x, y))
    except SingularityError:
        raise SingularityError(f"section point {tuple(p)!r} is on the singular line") from None


# Left multipliers by (sigma, eps); ``dl`` is the digit (times lambda for Hecke groups).
FLOW_CASES = {
    (-1, -1): lambda dl: Mat2(0, 1, -1, dl),
    (-1, +1): lambda dl: Mat2(1, dl, 0, 1),
    (+1, -1): lambda dl: Mat2(dl, -1, 1, 0),
    (+1, +1): lambda dl: Mat2(1, 0, dl, 1),
}


def check_flow_identity(p, eps, dl, xn, rtol=0.0, strict=True) -> FlowIdentity:
    """Check ``M A_sigma(p) g_t = +-A_{sigma'}(image)`` with ``e^{t/2} = eps/x``.

    ``xn`` is the image of ``x`` under the interval map and ``dl`` the
    translation it used.
    """
    x, y, sigma = p
    M = FLOW_CASES[(sigma, eps)](dl)
    target = SectionPoint(xn, eps * x * (1 - x * y), -eps * sigma)
    lhs = flow_scaled(M @ lift(p), eps / x)
    ok = equal_pm(lhs, lift(target), rtol)
    if strict and not ok:
        raise FlowIdentityViolation(f"flow identity fails at {tuple(p)!r}: {lhs} vs {lift(target)}")
    return FlowIdentity(M, target, ok)


def verify_flow_identity(alpha, p, rtol: float | None = None, strict: bool = True) -> FlowIdentity:
    """Verify the matrix form of one step of the return map.

    Exact inputs are checked exactly; float inputs to ``FLOAT_RTOL``.

    >>> from fractions import Fraction as F
    >>> verify_flow_identity(F(1, 2), SectionPoint(F(-2, 5), 0, -1)).multiplier
    Mat2(a=0, b=1, c=-1, d=3)
    """
    x, y, sigma = p
    _check_sigma(sigma)
    _check_point(alpha, x)
    if _is_zero(x):
        raise OrbitTerminated()
    eps, d, xn = _digit_step(alpha, x)
    if rtol is None:
        rtol = FLOAT_RTOL if isinstance(x, float) or isinstance(y, float) else 0.0
    return check_flow_identity(SectionPoint(x, y, sigma), eps, d, xn, rtol, strict)


def candidate_multiplier(p, q) -> Mat2:
    """``A' A^{-1}``: the only matrix that could identify the two lifts."""
    return lift(q) @ lift(p).inverse()


def classes_distinct(p, q, tol: float = 1e-6) -> bool:
    """True if the lifts of ``p`` and ``q`` cannot be PSL2(Z)-equivalent.

    They are equivalent iff ``A' A^{-1}`` is an integer matrix; an entry
    further than ``tol`` from an integer rules that out.
    """
    M = candidate_multiplier(p, q)
    return not M.is_integral(tol=tol)
