"""Birkhoff estimates of entropy and return times, and the entropy-area report.

The entropy of ``T_alpha`` is the space average of ``log|T'| = -2 log|x|``
against its invariant probability measure (Rokhlin).  The same function is
the return time of the geodesic flow to the cross-section, so its average
along an orbit of the return map is the Kac mean return time.  Both equal
``pi^2 / (6 mu(Omega_alpha))``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from geoflow import _kernels
from geoflow._parallel import ordered_map
from geoflow.cf import ZERO_FLOOR, check_alpha, into_interval
from geoflow.natext import DEFAULT_BURN_IN, Estimate, mu_area, orbit_raster

KAPPA = 3 / math.pi ** 2
ENTROPY_AREA = math.pi ** 2 / 6
MIN_STEPS = 10_000
N_BATCHES = 100
START_JITTER = 1e-3


def generic_start(alpha, rng: np.random.Generator, lam: float = 1.0) -> float:
    """``1/pi`` jittered by ``rng`` and translated into the map's interval."""
    v = 1 / math.pi + START_JITTER * rng.uniform(-1.0, 1.0)
    return lam * into_interval(float(alpha), v)[0]


def _batch_estimate(sums: np.ndarray, n: int, seed, restarts: int, method: str) -> Estimate:
    nb = sums.size
    size = n // nb
    sizes = np.full(nb, size, dtype=float)
    sizes[-1] += n - size * nb
    means = sums / sizes
    value = float(sums.sum() / n)
    stderr = float(np.std(means, ddof=1) / math.sqrt(nb))
    return Estimate(value, stderr, n, seed, method, restarts)


def _check_n(n):
    if n < MIN_STEPS:
        raise ValueError(f"need at least {MIN_STEPS} orbit steps, got {n}")


def rokhlin_entropy(alpha, n: int, seed: int = 42, lam: float = 1.0,
                    burn_in: int = DEFAULT_BURN_IN, x0=None) -> Estimate:
    """Birkhoff average of ``-2 log|x_k|`` with batch-means error bar.

    A collapse onto 0 (possible only through rounding) restarts the orbit
    from a freshly jittered point; the count is kept in ``restarts``.
    """
    check_alpha(alpha)
    _check_n(n)
    rng = np.random.default_rng(seed)
    x = generic_start(alpha, rng, lam) if x0 is None else float(x0)
    alpha, lam = float(alpha), float(lam)
    sums = np.zeros(N_BATCHES)
    batch = n // N_BATCHES
    restarts, k = 0, 0
    warm = burn_in
    while k < n:
        if abs(x) < ZERO_FLOOR:
            restarts += 1
            x, warm = generic_start(alpha, rng, lam), burn_in
        if warm:
            reached, x = _kernels.rokhlin_batches(alpha, lam, x, 0, warm, 1, np.zeros(1), ZERO_FLOOR)
            warm = 0
            if reached < burn_in:
                continue
        k, x = _kernels.rokhlin_batches(alpha, lam, x, k, n, batch, sums, ZERO_FLOOR)
    return _batch_estimate(sums, n, seed, restarts, "rokhlin")


def kac_return_mean(alpha, n: int, seed: int = 42, lam: float = 1.0,
                    burn_in: int = DEFAULT_BURN_IN, independent: bool = False) -> Estimate:
    """Mean return time along an orbit of the two-sheeted return map.

    The orbit starts at ``(x0, 0, +1)`` over the same seeded start as
    :func:`rokhlin_entropy`.  With ``independent=True`` it uses the next draw
    of the generator instead, giving a statistically independent orbit.
    """
    check_alpha(alpha)
    _check_n(n)
    rng = np.random.default_rng(seed)
    if independent:
        generic_start(alpha, rng, lam)
    alpha, lam = float(alpha), float(lam)
    x, y, sigma = generic_start(alpha, rng, lam), 0.0, 1.0
    sums = np.zeros(N_BATCHES)
    batch = n // N_BATCHES
    restarts, k = 0, 0
    warm = burn_in
    while k < n:
        if abs(x) < ZERO_FLOOR:
            restarts += 1
            x, y, sigma, warm = generic_start(alpha, rng, lam), 0.0, 1.0, burn_in
        if warm:
            reached, x, y, sigma, _ = _kernels.section_batches(
                alpha, lam, x, y, sigma, 0, warm, 1, np.zeros(1), ZERO_FLOOR)
            warm = 0
            if reached < burn_in:
                continue
        k, x, y, sigma, _ = _kernels.section_batches(alpha, lam, x, y, sigma, k, n, batch, sums, ZERO_FLOOR)
    return _batch_estimate(sums, n, seed, restarts, "kac")


def combined_agreement(a: Estimate, b: Estimate) -> float:
    """``|a - b|`` in units of the combined standard error."""
    s = math.hypot(a.stderr, b.stderr)
    return abs(a.value - b.value) / s if s > 0 else (0.0 if a.value == b.value else math.inf)


@dataclass
class EntropyReport:
    alpha: float
    h_hat: Estimate
    mu_hat: Estimate
    product: float
    target: float
    rel_error: float
    n: int
    seed: int
    resolution: int
    extras: dict = field(default_factory=dict)

    @property
    def product_stderr(self) -> float:
        h, m = self.h_hat, self.mu_hat
        return self.product * math.hypot(h.stderr / h.value, m.stderr / m.value)

    def within(self, tol: float) -> bool:
        return self.rel_error <= tol

    def to_dict(self) -> dict:
        out = {
            "alpha": self.alpha,
            "h_hat": self.h_hat.value,
            "h_stderr": self.h_hat.stderr,
            "mu_hat": self.mu_hat.value,
            "mu_stderr": self.mu_hat.stderr,
            "product": self.product,
            "target": self.target,
            "rel_error": self.rel_error,
            "n": self.n,
            "seed": self.seed,
            "resolution": self.resolution,
        }
        out.update(self.extras)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def entropy_area_report(alpha, n: int = 1_000_000, resolution: int = 512, seed: int = 42,
                        burn_in: int = DEFAULT_BURN_IN, lam: float = 1.0,
                        target: float = ENTROPY_AREA, block: int = 32) -> EntropyReport:
    """Estimate ``h`` and ``mu(Omega)`` independently and compare their product.

    Also reports the section measure ``2 mu`` and the return-map entropy
    ``1/(kappa * 2 mu)`` it implies, with ``kappa = 3/pi^2``.
    """
    check_alpha(alpha)
    rng = np.random.default_rng(seed)
    x0 = generic_start(alpha, rng, lam)
    tasks = [
        lambda: rokhlin_entropy(alpha, n, seed, lam, burn_in),
        lambda: orbit_raster(alpha, (x0, 0.0), n, resolution, resolution,
                             burn_in=burn_in, lam=lam, seed=seed),
    ]
    h_hat, raster = ordered_map(lambda f: f(), tasks)
    mu_hat = mu_area(raster, block=block)
    product = h_hat.value * mu_hat.value
    ell = 2 * mu_hat.value
    h_phi = 1 / (KAPPA * ell)
    extras = {
        "ell_hat": ell,
        "h_phi": h_phi,
        "h_phi_rel_error": abs(h_phi - h_hat.value) / h_hat.value,
        "mu_method": mu_hat.method,
        "restarts": h_hat.restarts,
        "burn_in": burn_in,
    }
    return EntropyReport(float(alpha), h_hat, mu_hat, product, target,
                         abs(product - target) / target, n, seed, resolution, extras)
