import math
import warnings
from fractions import Fraction as F

import numpy as np
import pytest

from geoflow.cf import DomainError, OrbitTerminated, step
from geoflow.ergodic import entropy_area_report
from geoflow.matrix import Mat2
from geoflow.quadratic import QuadraticNumber
from geoflow.rosen import (AlphaRangeWarning, HeckeIndex, RosenDigit, alpha_rosen_step, hecke_entropy_report,
                           hecke_generators, hecke_lambda, rosen_flow_verify, rosen_interval, rosen_step,
                           unit_tangent_volume)
from geoflow.section import SectionPoint, verify_flow_identity
from geoflow.suites import rosen_suite

SQRT2 = QuadraticNumber.sqrt(2)


def test_hecke_lambda():
    assert hecke_lambda(3) == 1
    assert hecke_lambda(4) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert hecke_lambda(6) == pytest.approx(math.sqrt(3), abs=1e-15)
    for q in range(3, 40):
        assert 1 <= hecke_lambda(q) < 2
    with pytest.raises(DomainError):
        hecke_lambda(2)
    with pytest.raises(DomainError):
        HeckeIndex(2)


def test_exact_lambda():
    assert HeckeIndex(4).exact_lam * HeckeIndex(4).exact_lam == 2
    assert HeckeIndex(6).exact_lam * HeckeIndex(6).exact_lam == 3
    assert not HeckeIndex(5).is_exact


def test_rosen_step_q4():
    xn, dig = rosen_step(4, 0.6)
    assert xn == pytest.approx(5 / 3 - math.sqrt(2), abs=1e-15) and dig == (1, 1)
    xn, dig = rosen_step(4, F(3, 5))
    assert xn == QuadraticNumber(F(5, 3), -1, 2) and dig == RosenDigit(1, 1)


def test_rosen_step_errors():
    with pytest.raises(OrbitTerminated):
        rosen_step(4, 0.0)
    with pytest.raises(DomainError):
        rosen_step(4, 0.8)
    with pytest.raises(TypeError):
        rosen_step(5, F(1, 3))


def test_q3_is_nearest_integer():
    rng = np.random.default_rng(0)
    for x in rng.uniform(-0.5, 0.5, 10_000):
        assert rosen_step(3, float(x))[0] == step(0.5, float(x))


def test_q3_alpha_is_alpha_cf():
    rng = np.random.default_rng(1)
    for _ in range(10_000):
        alpha = F(int(rng.integers(1, 101)), 100)
        q = int(rng.integers(2, 500))
        x = alpha - 1 + F(int(rng.integers(0, q)), q)
        if x == 0:
            continue
        assert alpha_rosen_step(3, alpha, x)[0] == step(alpha, x)


@pytest.mark.parametrize("q", [4, 5, 7, 12])
def test_alpha_half_is_rosen(q):
    rng = np.random.default_rng(q)
    lo, hi = rosen_interval(q)
    for x in rng.uniform(lo, hi, 10_000):
        assert alpha_rosen_step(q, 0.5, float(x)) == rosen_step(q, float(x))


def test_exact_specializations():
    # rational-in-Q(sqrt 2) points agree exactly between the two entry points
    rng = np.random.default_rng(2)
    for _ in range(500):
        x = QuadraticNumber(0, F(int(rng.integers(-499, 500)), 1000), 2)
        if x == 0:
            continue
        assert alpha_rosen_step(4, F(1, 2), x) == rosen_step(4, x)


def test_range_closure_edges():
    lam = hecke_lambda(5)
    xn, _ = rosen_step(5, lam / 2 - 1e-6)
    assert -lam / 2 <= xn < lam / 2
    a = 1 / math.sqrt(2)
    xn, _ = alpha_rosen_step(4, a, 0.9)
    lo, hi = rosen_interval(4, a)
    assert lo <= xn < hi


@pytest.mark.parametrize("q", range(3, 13))
def test_range_closure(q):
    rng = np.random.default_rng(10 + q)
    lam = hecke_lambda(q)
    for alpha in (0.5, 1 / lam):
        lo, hi = rosen_interval(q, alpha)
        for x in rng.uniform(lo, hi, 10_000):
            if x == 0:
                continue
            xn, dig = alpha_rosen_step(q, alpha, float(x))
            assert lo <= xn < hi and dig.d >= 1


def test_generators():
    T, S = hecke_generators(3)
    assert T == Mat2(1, 1, 0, 1) and S == Mat2(0, -1, 1, 0)
    assert T.det() == 1 and S.det() == 1
    for q in (3, 4, 6):
        T, S = hecke_generators(q)
        P = (S @ T) ** q
        assert P == Mat2.identity() or P == -Mat2.identity()
        assert (T @ S).trace() == HeckeIndex(q).exact_lam
    for q in range(3, 13):
        T, S = hecke_generators(q)
        P = ((S @ T) ** q).to_float()
        assert abs(abs(P.a) - 1) < 1e-9 and abs(P.b) < 1e-9 and abs(P.c) < 1e-9


def test_flow_verify_examples():
    p = SectionPoint(F(-2, 5), F(1, 7), -1)
    r3 = rosen_flow_verify(3, F(1, 2), p)
    r = verify_flow_identity(F(1, 2), p)
    assert r3.ok and r3.multiplier == r.multiplier and r3.target == r.target
    assert rosen_flow_verify(4, 0.5, SectionPoint(0.6, 0.0, -1)).ok
    rng = np.random.default_rng(5)
    lo, hi = rosen_interval(6)
    for _ in range(100):
        p = SectionPoint(float(rng.uniform(lo, hi)), float(rng.uniform(0, 1)), int(rng.choice([-1, 1])))
        assert rosen_flow_verify(6, 0.5, p).ok


def test_flow_verify_exact_field():
    r = rosen_flow_verify(4, F(1, 2), SectionPoint(QuadraticNumber(0, F(3, 10), 2), F(1, 3), 1))
    assert r.ok and r.multiplier.det() == 1
    assert any(isinstance(e, QuadraticNumber) and e.b != 0 for e in r.multiplier.entries())


@pytest.mark.parametrize("q", range(3, 13))
def test_rosen_suite(q):
    res = rosen_suite(q, 300, seed=q)
    assert res.ok, res.first_failure
    if q in (3, 4, 6):
        assert res.counts["flow-exact"] == 300


def test_unit_tangent_volume():
    assert unit_tangent_volume(3) == pytest.approx(math.pi ** 2 / 3)
    assert unit_tangent_volume(4) == pytest.approx(math.pi ** 2 / 2)


def test_q3_report_matches_alpha_cf():
    r = hecke_entropy_report(3, 0.5, 10 ** 6, 512)
    a = entropy_area_report(0.5, 10 ** 6, 512)
    assert r.product == a.product and r.target == a.target
    assert list(r.extras)[:2] == ["q", "lambda"] and r.extras["q"] == 3


@pytest.mark.parametrize("q", [4, 5])
def test_hecke_report(q):
    r = hecke_entropy_report(q, 0.5, 10 ** 7, 1024)
    assert r.target == pytest.approx(unit_tangent_volume(q) / 2)
    assert r.within(0.02), r.to_dict()


def test_alpha_range_warning():
    with pytest.warns(AlphaRangeWarning):
        hecke_entropy_report(4, 0.6, 10 ** 4, 64)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        hecke_entropy_report(4, 0.5, 10 ** 4, 64)
    with pytest.raises(DomainError):
        hecke_entropy_report(4, 0.9, 10 ** 4, 64)
