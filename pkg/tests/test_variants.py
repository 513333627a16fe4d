import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from geoflow.cf import DomainError, OrbitTerminated
from geoflow.matrix import Mat2, SingularityError
from geoflow.natext import count_components, planar_step
from geoflow.suites import fib_suite
from geoflow.variants import (GOLDEN, MAX_PREFIX, N1, DegenerateInput, G_step, G_step_array, Interval,
                              VariantKind, fib, fib_matrix_power, g_step, partition_index, strip,
                              tower_level, variant_digit_matrix, variant_planar_step, variant_raster,
                              variant_step)

SEED = (math.e / 10, 0.0)


def test_variant_kind_parse():
    assert VariantKind.parse("positive") is VariantKind.POSITIVE
    assert VariantKind.parse("negative_det") is VariantKind.NEGATIVE
    assert VariantKind.POSITIVE.sign == 1 and VariantKind.NEGATIVE.sign == -1
    with pytest.raises(ValueError):
        VariantKind.parse("sideways")


def test_variant_step_examples():
    assert variant_step("positive", F(3, 5), F(1, 2)) == 0
    assert variant_step("negative", F(3, 5), F(1, 2)) == 0
    with pytest.raises(OrbitTerminated):
        variant_step("positive", F(3, 5), F(0))
    with pytest.raises(DomainError):
        variant_step("positive", F(3, 10), F(1, 2))


def test_backwards_cf():
    rng = np.random.default_rng(0)
    for x in rng.uniform(1e-9, 1, 10_000):
        v = variant_step("positive", 1, float(x))
        assert 0 <= v < 1
        assert v == pytest.approx(-1 / x - math.floor(-1 / x), abs=1e-9)


@pytest.mark.parametrize("kind", ["positive", "negative"])
def test_determinant_sign_law(kind):
    rng = np.random.default_rng(1)
    sign = VariantKind.parse(kind).sign
    for _ in range(10_000):
        alpha = F(int(rng.integers(1, 100)), 100)
        q = int(rng.integers(2, 1000))
        x = alpha - 1 + F(int(rng.integers(0, q)), q)
        if x == 0:
            continue
        P = variant_digit_matrix(kind, alpha, x)
        assert P.det() == sign
        assert P.act(x) == variant_step(kind, alpha, x)


@given(st.fractions(min_value=F(1, 100), max_value=F(99, 100), max_denominator=100),
       st.fractions(min_value=0, max_value=1, max_denominator=10 ** 4),
       st.fractions(min_value=0, max_value=1, max_denominator=100),
       st.sampled_from(["positive", "negative"]))
def test_variant_planar_step(alpha, u, y, kind):
    x = alpha - 1 + u
    if x == 0 or not x < alpha:
        return
    P = variant_digit_matrix(kind, alpha, x)
    try:
        q = variant_planar_step(kind, alpha, (x, y))
    except SingularityError:
        # y on the pole of the inverse-transpose action: outside the extension's domain
        assume(False)
    assert q.x == variant_step(kind, alpha, x)
    assert q.y == P.inverse_transpose().act(y)
    assert alpha - 1 <= q.x < alpha


def test_variant_y_formulas():
    x, a, y = F(1, 2), F(3, 5), F(1, 3)
    # positive: P = (-d -1; 1 0), so y' = 1/(d - y); here d = -2
    d = math.floor(-1 / x + 1 - a)
    assert variant_planar_step("positive", a, (x, y)).y == 1 / (d - y)
    d = math.floor(1 / x + 1 - a)
    assert variant_planar_step("negative", a, (x, y)).y == 1 / (y + d)


@pytest.mark.parametrize("alpha", [0.2, 0.3, 0.6])
def test_positive_figures_connected(alpha):
    r = variant_raster("positive", alpha, SEED, 200_000, 512)
    assert r.meta["reached"] == 200_100 and r.overflow == 0
    assert count_components(r) == 1


def test_negative_figure_disconnected():
    r = variant_raster("negative", 0.2, SEED, 200_000, 512)
    assert count_components(r) > 1


def test_variant_raster_deterministic():
    a = variant_raster("positive", 0.3, SEED, 10_000, 64)
    b = variant_raster("positive", 0.3, SEED, 10_000, 64)
    assert np.array_equal(a.counts, b.counts) and a.bounds == b.bounds


# --- Fibonacci and strips ------------------------------------------------

def test_fib_examples():
    assert [fib(j) for j in range(8)] == [0, 1, 1, 2, 3, 5, 8, 13]
    assert fib_matrix_power(1) == N1 == Mat2(0, 1, 1, 1)
    assert fib_matrix_power(4) == Mat2(2, 3, 3, 5)
    for n in range(3, 21):
        assert fib_matrix_power(n - 2).act(0) == F(fib(n - 2), fib(n - 1))
    with pytest.raises(ValueError):
        fib_matrix_power(0)
    with pytest.raises(ValueError):
        fib(-1)


def test_fib_recurrence_big():
    m = fib_matrix_power(90)
    assert m == Mat2(fib(89), fib(90), fib(90), fib(91))
    assert fib(90) > 2 ** 61
    m300 = fib_matrix_power(300)
    assert m300 @ N1 == fib_matrix_power(301) and m300.d == fib(301)


def test_strip_examples():
    s = strip(2)
    assert (s.lo, s.hi) == (0, F(1, 2)) and 0 not in s and F(1, 2) in s
    s = strip(3)
    assert (s.lo, s.hi) == (F(2, 3), 1) and 1 in s
    with pytest.raises(ValueError):
        strip(1)


def test_fib_suite():
    res = fib_suite(90, 30)
    assert res.ok, res.first_failure


def test_strips_cover():
    # strips 2..K and the golden ratio's neighbourhood tile (0, 1]
    strips = sorted((strip(n) for n in range(2, 31)), key=lambda s: s.lo)
    assert strips[0].lo == 0 and strips[-1].hi == 1
    gaps = [(a.hi, b.lo) for a, b in zip(strips, strips[1:]) if a.hi != b.lo]
    assert len(gaps) == 1
    lo, hi = gaps[0]
    assert lo < GOLDEN < hi and hi - lo < 1e-11


def test_interval_disjoint():
    assert Interval(F(0), F(1, 2)).disjoint(Interval(F(1, 2), F(1)))
    assert not Interval(F(0), F(1, 2), hi_open=False).disjoint(Interval(F(1, 2), F(1), lo_open=False))
    assert not Interval(F(0), F(2, 3)).disjoint(Interval(F(1, 2), F(1)))


# --- partition and the map g ---------------------------------------------

def test_g_step_examples():
    assert g_step(F(2, 3)) == (F(1, 2), 1)
    assert g_step(F(5, 12)) == (F(1, 2), 2)
    x = 1 / (2 + 1 / (1 + 1 / (3 + math.pi / 10)))
    assert partition_index(x) == 3


def test_partition_errors():
    with pytest.raises(DegenerateInput):
        partition_index(F(1, 2))
    with pytest.raises(DomainError):
        partition_index(F(3, 2))
    # one more digit than the cap
    x = F(0)
    for _ in range(MAX_PREFIX + 2):
        x = 1 / (1 + x)
    with pytest.raises(DegenerateInput):
        partition_index(1 / (2 + x))


def test_g_range():
    rng = np.random.default_rng(3)
    xs = rng.uniform(0, 1, 100_000)
    for x in xs:
        gx, n = g_step(float(x))
        assert 0 < gx < 1 and n >= 1


def test_G_step_single_on_A1():
    p = (F(3, 4) + F(1, 97), F(1, 3))
    assert partition_index(p[0]) == 1
    assert G_step(p) == planar_step(1, p)


def test_tower_tops_in_strips_exact():
    rng = np.random.default_rng(4)
    seen = set()
    for _ in range(20_000):
        q = int(rng.integers(10 ** 6, 10 ** 7))
        x = F(int(rng.integers(1, q)), q)
        y = F(int(rng.integers(1, 1000)), 1000)
        try:
            n, top = tower_level((x, y))
        except DegenerateInput:
            continue
        if 2 <= n <= 8:
            assert 0 <= top.x < F(1, 2) and top.y in strip(n)
            seen.add(n)
    assert seen == set(range(2, 9))


def test_odd_strip_endpoint():
    # y = 0 lands on the lower endpoint, which the odd strips leave open
    x = F(1232993, 3383759)
    n, top = tower_level((x, F(0)))
    assert n == 3 and top.y == strip(3).lo and top.y not in strip(3)


def test_tower_injectivity_sampling():
    # binned in tower-top coordinates, where distinct strips are separated; G is
    # one more bijective step of the planar map, which squeezes deep cylinders
    # against y = 0 below any fixed bin size
    rng = np.random.default_rng(5)
    xs, ys = rng.uniform(0, 1, 100_000), rng.uniform(0, 1, 100_000)
    owner = {}
    for x, y in zip(xs, ys):
        n, top = tower_level((x, y))
        key = (int(top.x * 1e4), int(top.y * 1e4))
        assert owner.setdefault(key, n) == n
    gx, gy, ns = G_step_array(xs[:1000], ys[:1000])
    for x, y, a, b, n in zip(xs, ys, gx, gy, ns):
        assert (a, b) == G_step((x, y)) and n == tower_level((x, y))[0]
