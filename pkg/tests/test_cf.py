import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from geoflow.cf import (INFINITY, DegenerateTruncation, Digit, DomainError, Expansion, digit,
                        expand, gauss_digit, into_interval, reconstruct, step)

ALPHAS = [F(1, 10), F(3, 10), F(1, 2), F(21, 34), F(4, 5), F(1)]


def alphas():
    return st.fractions(min_value=F(1, 1000), max_value=1, max_denominator=1000).filter(lambda a: a > 0)


def point_in(alpha, draw):
    u = draw(st.fractions(min_value=0, max_value=1, max_denominator=10 ** 6).filter(lambda v: v < 1))
    return alpha - 1 + u


# --- examples ------------------------------------------------------------

def test_digit_examples():
    assert digit(1, F(7, 10)) == (1, 1)
    assert digit(F(1, 2), F(-2, 5)) == (-1, 3)
    assert digit(1, F(0)) == (1, INFINITY)


def test_step_examples():
    assert step(1, F(7, 10)) == F(3, 7)
    for a in ALPHAS:
        assert step(a, F(0)) == 0
    assert step(F(1, 2), F(-2, 5)) == F(-1, 2)


def test_expand_examples():
    e = expand(1, F(7, 10), 3)
    assert e.d0 == 0 and e.digits == ((1, 1), (1, 2), (1, 3))
    e = expand(1, F(1, 2), 3)
    assert e.d0 == 0 and e.digits == ((1, 2),) and e.terminated
    e = expand(1, F(0), 5)
    assert e.d0 == 0 and e.digits == () and e.terminated


def test_reconstruct_examples():
    e = expand(1, F(7, 10), 3)
    assert reconstruct(e, 3) == F(7, 10)
    assert reconstruct(Expansion(5), 0) == 5
    x = F(7, 10)
    assert abs(reconstruct(e, 2) - x) < abs(reconstruct(e, 1) - x)


def test_domain_errors():
    with pytest.raises(DomainError):
        digit(1, F(1))
    with pytest.raises(DomainError):
        step(F(1, 2), F(-3, 5))
    with pytest.raises(DomainError):
        step(0, F(0))
    with pytest.raises(DomainError):
        expand(F(3, 2), 1, 1)
    with pytest.raises(ValueError):
        expand(1, 1, -1)


def test_degenerate_truncation():
    # 1 / (0 + 0) with a zero tail
    with pytest.raises(DegenerateTruncation):
        reconstruct(Expansion(0, (Digit(1, 0),)), 1)
    with pytest.raises(ValueError):
        reconstruct(Expansion(0), 1)


def test_into_interval():
    y, d0 = into_interval(F(1, 2), F(17, 10))
    assert y == F(-3, 10) and d0 == 2
    y, d0 = into_interval(0.3, math.e)
    assert 0.3 - 1 <= y < 0.3 and y + d0 == pytest.approx(math.e)


# --- properties ----------------------------------------------------------

@given(st.data())
def test_range_closure_exact(data):
    alpha = data.draw(alphas())
    x = point_in(alpha, data.draw)
    assert alpha - 1 <= step(alpha, x) < alpha


def test_range_closure_bulk():
    # 10^5 exact rationals over random alphas
    rng = np.random.default_rng(0)
    for _ in range(100_000):
        alpha = F(int(rng.integers(1, 1001)), 1000)
        q = int(rng.integers(1, 10 ** 4))
        x = alpha - 1 + F(int(rng.integers(0, q)), q)
        assert alpha - 1 <= step(alpha, x) < alpha


@given(st.data())
def test_digit_consistency(data):
    alpha = data.draw(alphas())
    x = point_in(alpha, data.draw)
    if x == 0:
        return
    eps, d = digit(alpha, x)
    assert step(alpha, x) == abs(1 / x) - d
    assert eps == (1 if x > 0 else -1)
    assert d >= 1


@given(st.data())
def test_reconstruct_recovers_rationals(data):
    alpha = data.draw(alphas())
    x = data.draw(st.fractions(min_value=-5, max_value=5, max_denominator=10 ** 5))
    # small alpha behaves like the by-excess map, so expansions can run long
    e = expand(alpha, x, 100_000)
    assert e.terminated
    assert reconstruct(e) == x


@pytest.mark.parametrize("alpha", ALPHAS, ids=str)
def test_convergent_error_monotone(alpha):
    # brute force on 10^3 random rationals per alpha
    rng = np.random.default_rng(1)
    for _ in range(1000):
        q = int(rng.integers(2, 10 ** 6))
        x = alpha - 1 + F(int(rng.integers(0, q)), q)
        e = expand(alpha, x, 200)
        errs = [abs(reconstruct(e, k) - x) for k in range(1, len(e) + 1)]
        for a, b in zip(errs, errs[1:]):
            assert b < a or a == 0


def test_irrational_error_decreasing():
    for alpha in (0.3, 0.5, 0.8, 1.0):
        # the double nearest pi, taken exactly; far from terminating after 12 digits
        a = F(alpha)
        x = into_interval(a, F(math.pi))[0]
        e = expand(a, x, 12)
        errs = [abs(reconstruct(e, k) - x) for k in range(1, 13)]
        assert all(b < a for a, b in zip(errs, errs[1:]))


def test_gauss_specialization():
    rng = np.random.default_rng(2)
    for x in rng.uniform(1e-6, 1, 10_000):
        assert digit(1, float(x)) == (1, gauss_digit(float(x)))
        assert step(1, float(x)) == pytest.approx(1 / x - math.floor(1 / x), abs=1e-9)


@given(st.floats(min_value=-0.7, max_value=0.3, exclude_max=True))
def test_float_range_closure(x):
    assert -0.7 <= step(0.3, x) < 0.3
