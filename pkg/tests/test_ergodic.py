import json
import math

import numpy as np
import pytest

from geoflow.cf import DomainError
from geoflow.ergodic import (ENTROPY_AREA, KAPPA, combined_agreement, entropy_area_report,
                             generic_start, kac_return_mean, rokhlin_entropy)

H1 = math.pi ** 2 / (6 * math.log(2))


def test_constants():
    assert 1 / KAPPA == pytest.approx(math.pi ** 2 / 3)
    assert H1 == pytest.approx(2.37314, abs=1e-5)


def test_generic_start():
    rng = np.random.default_rng(0)
    for alpha in (0.3, 0.5, 1.0):
        x = generic_start(alpha, rng)
        assert alpha - 1 <= x < alpha
        assert abs(((x - 1 / math.pi) + 0.5) % 1 - 0.5) <= 1e-3 + 1e-15


def test_rokhlin_alpha1():
    est = rokhlin_entropy(1, 10 ** 7)
    assert abs(est.value / H1 - 1) < 0.005
    assert est.samples == 10 ** 7 and est.seed == 42 and est.stderr > 0
    small = rokhlin_entropy(1, 10 ** 4)
    assert combined_agreement(small, est) < 1


def test_restart_from_zero():
    est = rokhlin_entropy(1, 10 ** 4, x0=0.0)
    assert est.restarts == 1 and math.isfinite(est.value)


def test_preconditions():
    for f in (rokhlin_entropy, kac_return_mean):
        with pytest.raises(ValueError):
            f(1, 0)
        with pytest.raises(ValueError):
            f(1, 9999)
        with pytest.raises(DomainError):
            f(0, 10 ** 4)


def test_kac_alpha1():
    est = kac_return_mean(1, 10 ** 7)
    assert abs(est.value / H1 - 1) < 0.005


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8, 1.0])
def test_kac_agrees_with_rokhlin(alpha):
    h = rokhlin_entropy(alpha, 10 ** 6)
    k = kac_return_mean(alpha, 10 ** 6)
    assert combined_agreement(h, k) <= 2
    ki = kac_return_mean(alpha, 10 ** 6, independent=True)
    assert combined_agreement(h, ki) <= 3


@pytest.mark.parametrize("alpha", [0.3, 1.0])
def test_kac_calibration(alpha):
    # independent orbits: the agreement statistic should be roughly standard normal
    zs = []
    for seed in range(40):
        h = rokhlin_entropy(alpha, 10 ** 5, seed=seed)
        k = kac_return_mean(alpha, 10 ** 5, seed=seed, independent=True)
        zs.append((k.value - h.value) / math.hypot(h.stderr, k.stderr))
    zs = np.array(zs)
    assert abs(zs.mean()) < 0.6
    assert 0.6 < zs.std() < 1.5


def test_deterministic():
    a = rokhlin_entropy(0.5, 10 ** 5, seed=7)
    b = rokhlin_entropy(0.5, 10 ** 5, seed=7)
    assert a == b
    assert rokhlin_entropy(0.5, 10 ** 5, seed=8) != a
    r1 = entropy_area_report(0.5, 10 ** 5, 128, seed=3).to_json()
    r2 = entropy_area_report(0.5, 10 ** 5, 128, seed=3).to_json()
    assert r1 == r2


def test_stderr_refinement():
    prev = None
    for n in (10 ** 5, 2 * 10 ** 5, 4 * 10 ** 5, 8 * 10 ** 5):
        s = rokhlin_entropy(0.5, n).stderr
        if prev is not None:
            # expected ratio 1/sqrt(2); allow batch-means noise
            assert s < 1.2 * prev
        prev = s


@pytest.mark.parametrize("alpha,tol", [(1.0, 0.01), (0.5, 0.01), (0.3, 0.02)])
def test_entropy_area_report(alpha, tol):
    rep = entropy_area_report(alpha, 10 ** 7, 1024)
    assert rep.within(tol), rep.to_dict()
    assert rep.rel_error == pytest.approx(abs(rep.product - ENTROPY_AREA) / ENTROPY_AREA)
    assert rep.extras["ell_hat"] == pytest.approx(2 * rep.mu_hat.value)
    assert rep.extras["h_phi_rel_error"] < 2 * tol
    assert rep.h_hat.seed == 42 and rep.mu_hat.samples == 10 ** 7


def test_report_schema():
    rep = entropy_area_report(1.0, 10 ** 5, 128)
    d = json.loads(rep.to_json())
    keys = ["alpha", "h_hat", "h_stderr", "mu_hat", "mu_stderr", "product", "target", "rel_error",
            "n", "seed", "resolution"]
    assert list(d)[:len(keys)] == keys
    assert rep.product_stderr > 0


def test_mu_anchor_alpha1():
    rep = entropy_area_report(1.0, 10 ** 7, 1024)
    assert abs(rep.mu_hat.value / math.log(2) - 1) < 0.005
    assert abs(rep.h_hat.value / H1 - 1) < 0.01
