"""Sampled identity suites shared by the command line and the test-suite.

Each suite draws its sample from ``numpy.random.default_rng(seed)`` and
returns a :class:`SuiteResult`; exact suites use ``Fraction`` throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from geoflow import haar
from geoflow.cf import OrbitTerminated, check_alpha
from geoflow.matrix import Mat2
from geoflow.natext import conjugate_Z, planar_step, sigma_step
from geoflow.quadratic import QuadraticNumber
from geoflow.rosen import HeckeIndex, alpha_rosen_step, hecke_generators, rosen_flow_verify
from geoflow.section import SectionPoint, phi_step, project, verify_flow_identity
from geoflow.variants import fib, fib_matrix_power, strip

EXACT_ALPHAS = (Fraction(3, 10), Fraction(1, 2), Fraction(21, 34), Fraction(4, 5), Fraction(1))


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failed: int = 0
    first_failure: object = None
    counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.checked > 0

    def record(self, ok: bool, witness=None, key=None):
        self.checked += 1
        if key is not None:
            self.counts[key] = self.counts.get(key, 0) + 1
        if not ok:
            self.failed += 1
            if self.first_failure is None:
                self.first_failure = witness

    def to_dict(self) -> dict:
        out = {"suite": self.name, "checked": self.checked, "failed": self.failed, "ok": self.ok}
        if self.counts:
            out["counts"] = {str(k): v for k, v in sorted(self.counts.items(), key=str)}
        if self.first_failure is not None:
            out["first_failure"] = repr(self.first_failure)
        return out


def _check_n(n):
    if n < 1:
        raise ValueError("a suite needs n >= 1 samples")


def random_rational(rng, lo, hi, max_den: int = 1000) -> Fraction:
    """A rational in [lo, hi) with denominator at most ``max_den``."""
    q = int(rng.integers(2, max_den + 1))
    lo_num = math.ceil(lo * q)
    hi_num = math.ceil(hi * q)
    return Fraction(int(rng.integers(lo_num, hi_num)), q)


def random_omega_point(alpha, rng, max_steps: int = 3):
    """An exact point of the planar domain: a few exact steps from (x, 0)."""
    while True:
        x = random_rational(rng, alpha - 1, alpha)
        if x == 0:
            continue
        p = (x, Fraction(0))
        try:
            for _ in range(int(rng.integers(0, max_steps + 1))):
                p = planar_step(alpha, p)
        except OrbitTerminated:
            continue
        if p[0] != 0:
            return p


def random_section_point(alpha, rng) -> SectionPoint:
    x, y = conjugate_Z(random_omega_point(alpha, rng))
    return SectionPoint(x, y, int(rng.choice([-1, 1])))


def flow_suite(alpha, n: int, seed: int) -> SuiteResult:
    """Matrix form of the return map at ``n`` exact section points."""
    _check_n(n)
    alpha = Fraction(alpha)
    check_alpha(alpha)
    rng = np.random.default_rng(seed)
    res = SuiteResult("flow")
    for _ in range(n):
        p = random_section_point(alpha, rng)
        r = verify_flow_identity(alpha, p, strict=False)
        M = r.multiplier
        ok = r.ok and M.det() == 1 and M.is_integral()
        eps = 1 if p.x >= 0 else -1
        res.record(ok, p, key=(p.sigma, eps))
    return res


def commute_suite(alpha, n: int, seed: int) -> SuiteResult:
    """Both commuting squares (projection and Z-conjugacy) at exact points."""
    _check_n(n)
    alpha = Fraction(alpha)
    check_alpha(alpha)
    rng = np.random.default_rng(seed)
    res = SuiteResult("commute")
    for _ in range(n):
        p = random_section_point(alpha, rng)
        lhs = project(phi_step(alpha, p))
        rhs = planar_step(alpha, project(p))
        res.record(lhs == rhs, ("project", p), key="project")
        w = random_omega_point(alpha, rng)
        res.record(conjugate_Z(planar_step(alpha, w)) == sigma_step(alpha, conjugate_Z(w)),
                   ("Z", w), key="Z")
    return res


def haar_suite(n: int, seed: int, pairs: int | None = None) -> SuiteResult:
    """Chart densities at ``n`` points per chart and ``pairs`` left translations."""
    _check_n(n)
    rng = np.random.default_rng(seed)
    res = SuiteResult("haar")
    for chart in haar.CHARTS:
        for _ in range(n):
            p = haar.sample_chart_point(chart, rng)
            res.record(haar.jacobian_validate(chart, p).ok, (chart, p), key=chart)
    pairs = n if pairs is None else pairs
    done = 0
    while done < pairs:
        M = haar.random_sl2(rng)
        p = haar.sample_agd(rng)
        try:
            ok = haar.left_invariance_check(M, p)
        except haar.ChartRetry:
            continue
        res.record(ok, ("left", M, p), key="left")
        done += 1
    return res


def fib_suite(max_j: int = 90, max_n: int = 30) -> SuiteResult:
    """Fibonacci matrix powers, strip endpoints, monotonicity and disjointness."""
    res = SuiteResult("fib")
    m = fib_matrix_power(1)
    for j in range(1, max_j + 1):
        m_next = fib_matrix_power(j + 1)
        res.record(m_next == m @ Mat2(0, 1, 1, 1), ("recurrence", j), key="recurrence")
        res.record(m == Mat2(fib(j - 1), fib(j), fib(j), fib(j + 1)), ("entries", j), key="entries")
        m = m_next
    golden = (math.sqrt(5) - 1) / 2
    strips = {n: strip(n) for n in range(2, max_n + 1)}
    for n, s in strips.items():
        a, b = Fraction(fib(n - 2), fib(n - 1)), Fraction(fib(n), fib(n + 1))
        want = (a, b) if n % 2 == 0 else (b, a)
        res.record((s.lo, s.hi) == want and s.length > 0, ("endpoints", n), key="endpoints")
        res.record(fib_matrix_power(n - 2).act(0) == a if n > 2 else a == 0, ("action", n), key="action")
    for n in range(2, max_n - 1):
        # even strips climb toward the golden ratio from below, odd ones descend from above
        res.record(strips[n + 2].lo == strips[n].hi if n % 2 == 0 else strips[n + 2].hi == strips[n].lo,
                   ("adjacent", n), key="monotone")
    # the inner endpoints squeeze the golden ratio; the last one is within 1e-12
    inner = [float(s.hi) if n % 2 == 0 else float(s.lo) for n, s in strips.items()]
    sides = all((v < golden) == (n % 2 == 0) for n, v in zip(strips, inner))
    res.record(sides and min(abs(v - golden) for v in inner) < 1e-12, ("limit", max_n), key="limit")
    ns = sorted(strips)
    for i, n in enumerate(ns):
        for m in ns[i + 1:]:
            res.record(strips[n].disjoint(strips[m]), ("disjoint", n, m), key="disjoint")
    return res


def _exact_rosen_point(h: HeckeIndex, alpha, rng):
    lam = h.exact_lam
    D = lam.D if isinstance(lam, QuadraticNumber) else None
    while True:
        if D is None:
            x = random_rational(rng, alpha - 1, alpha)
        else:
            x = QuadraticNumber(0, random_rational(rng, alpha - 1, alpha), D)
        if x != 0:
            y = random_rational(rng, 0, 1)
            return SectionPoint(x, y, int(rng.choice([-1, 1])))


def rosen_suite(q: int, n: int, seed: int, alpha=Fraction(1, 2)) -> SuiteResult:
    """Generators, range closure and the flow identity for one Hecke group."""
    _check_n(n)
    h = HeckeIndex(q)
    rng = np.random.default_rng(seed)
    res = SuiteResult(f"rosen-q{q}")
    T, S = hecke_generators(h)
    res.record(T.det() == 1 and S.det() == 1, "det", key="generators")
    res.record(abs(float((T @ S).trace()) - h.lam) < 1e-12, "trace", key="generators")
    lam = h.lam
    lo, hi = lam * (float(alpha) - 1), lam * float(alpha)
    for _ in range(n):
        x = float(rng.uniform(lo, hi))
        if x == 0:
            continue
        xn, dig = alpha_rosen_step(h, float(alpha), x)
        res.record(lo <= xn < hi and dig.d >= 1, ("range", x), key="range")
        y = float(rng.uniform(0, 1))
        p = SectionPoint(x, y, int(rng.choice([-1, 1])))
        res.record(rosen_flow_verify(h, float(alpha), p).ok, ("flow-float", p), key="flow-float")
        if h.is_exact:
            e = _exact_rosen_point(h, alpha, rng)
            r = rosen_flow_verify(h, alpha, e)
            res.record(r.ok and r.multiplier.det() == 1, ("flow-exact", e), key="flow-exact")
    return res
