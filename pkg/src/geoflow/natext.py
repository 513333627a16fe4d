"""Planar natural extensions, the Z-conjugacy, rasters and mu-areas.

The natural extension of ``T_alpha`` is the planar map

    (x, y) -> (T_alpha(x), 1 / (d_alpha(x) + eps(x) y))

on the orbit closure ``Omega_alpha`` of the points (x, 0).  It preserves
``mu = (1 + xy)^-2 dx dy``.  The change of variables
``Z(x, y) = (x, y / (1 + xy))`` turns ``mu`` into Lebesgue measure and
the map into ``(x, y) -> (T_alpha(x), eps(x) x (1 - xy))``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

import numpy as np
from scipy import ndimage

from geoflow import _kernels
from geoflow._parallel import ordered_map
from geoflow.cf import ZERO_FLOOR, OrbitTerminated, _check_point, _digit_step, _is_zero, check_alpha
from geoflow.matrix import SingularityError

DEFAULT_BURN_IN = 100


class PlanarPoint(NamedTuple):
    x: object
    y: object


class Bounds(NamedTuple):
    x0: float
    x1: float
    y0: float
    y1: float


@dataclass(frozen=True)
class Estimate:
    """A numeric estimate with its error bar and provenance."""

    value: float
    stderr: float
    samples: int
    seed: int | None = None
    method: str = ""
    restarts: int = 0

    def __post_init__(self):
        if not math.isfinite(self.stderr) or self.stderr < 0:
            raise ValueError(f"stderr must be finite and non-negative, got {self.stderr}")
        if self.samples <= 0:
            raise ValueError("an estimate needs at least one sample")


def mu_density(x, y):
    return 1.0 / (1.0 + x * y) ** 2


def planar_step(alpha, p) -> PlanarPoint:
    """``(T(x), 1/(d + eps y))``; raises :class:`OrbitTerminated` at x = 0."""
    x, y = p
    _check_point(alpha, x)
    if _is_zero(x):
        raise OrbitTerminated()
    eps, d, xn = _digit_step(alpha, x)
    den = d + eps * y
    return PlanarPoint(xn, Fraction(1, den) if isinstance(den, int) else 1 / den)


def conjugate_Z(p) -> PlanarPoint:
    x, y = p
    den = 1 + x * y
    if den == 0:
        raise SingularityError(f"(x, y) = {p!r} lies on the line y = -1/x")
    return PlanarPoint(x, y / den)


def inverse_Z(p) -> PlanarPoint:
    x, y = p
    den = 1 - x * y
    if den == 0:
        raise SingularityError(f"(x, y) = {p!r} lies on the line y = 1/x")
    return PlanarPoint(x, y / den)


def sigma_step(alpha, p) -> PlanarPoint:
    """The Lebesgue-preserving model ``(T(x), eps(x) x (1 - xy))``."""
    x, y = p
    _check_point(alpha, x)
    if _is_zero(x):
        raise OrbitTerminated()
    eps, _, xn = _digit_step(alpha, x)
    return PlanarPoint(xn, eps * x * (1 - x * y))


_STEPS = {"planar": planar_step, "sigma": sigma_step}


class Orbit:
    """Lazy stream of up to ``n`` iterates of ``seed_point``.

    After iteration, ``terminated_at`` holds the number of iterates produced
    before the orbit hit x = 0 (``None`` if it never did).

    >>> from fractions import Fraction as F
    >>> list(Orbit(1, (F(1, 2), 0), 5))
    [PlanarPoint(x=Fraction(0, 1), y=Fraction(1, 2))]
    """

    def __init__(self, alpha, seed_point, n: int, mode: str = "planar"):
        check_alpha(alpha)
        if mode not in _STEPS:
            raise ValueError(f"mode must be 'planar' or 'sigma', got {mode!r}")
        self.alpha = alpha
        self.seed_point = PlanarPoint(*seed_point)
        self.n = n
        self.mode = mode
        self.terminated_at: int | None = None

    def __iter__(self) -> Iterator[PlanarPoint]:
        f = _STEPS[self.mode]
        p = self.seed_point
        self.terminated_at = None
        for k in range(self.n):
            if _is_zero(p.x):
                self.terminated_at = k
                return
            p = f(self.alpha, p)
            yield p


def orbit(alpha, seed_point, n: int, mode: str = "planar") -> Orbit:
    return Orbit(alpha, seed_point, n, mode)


def orbit_array(alpha, seed_point, n: int, mode: str = "planar", lam: float = 1.0):
    """Float-mode iterates as two arrays (compiled loop)."""
    x, y = (float(v) for v in seed_point)
    m = 0 if mode == "planar" else 1
    return _kernels.planar_orbit(float(alpha), float(lam), x, y, int(n), m, ZERO_FLOOR)


# ---------------------------------------------------------------------------
# rasters
# ---------------------------------------------------------------------------

@dataclass
class Raster:
    """Hit counts on an ``ny x nx`` grid; row 0 is the bottom (lowest y)."""

    bounds: Bounds
    counts: np.ndarray
    overflow: int = 0
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.bounds = Bounds(*map(float, self.bounds))
        self.counts = np.asarray(self.counts, dtype=np.int64)
        if self.counts.ndim != 2 or min(self.counts.shape) < 1:
            raise ValueError("counts must be a non-empty 2-D array")
        if (self.counts < 0).any():
            raise ValueError("hit counts must be non-negative")

    @property
    def nx(self) -> int:
        return self.counts.shape[1]

    @property
    def ny(self) -> int:
        return self.counts.shape[0]

    @property
    def hits(self) -> int:
        return int(self.counts.sum())

    def __add__(self, other: "Raster") -> "Raster":
        if self.bounds != other.bounds or self.counts.shape != other.counts.shape:
            raise ValueError("can only merge rasters on the same grid")
        return Raster(self.bounds, self.counts + other.counts,
                      self.overflow + other.overflow, self.seed, dict(self.meta))

    def coarsen(self) -> "Raster":
        """Sum 2x2 blocks (an odd trailing row/column is dropped)."""
        ny, nx = self.ny // 2, self.nx // 2
        if nx < 1 or ny < 1:
            raise ValueError("raster too small to coarsen")
        b = self.bounds
        bounds = Bounds(b.x0, b.x0 + (b.x1 - b.x0) * 2 * nx / self.nx,
                        b.y0, b.y0 + (b.y1 - b.y0) * 2 * ny / self.ny)
        c = self.counts[: 2 * ny, : 2 * nx].reshape(ny, 2, nx, 2).sum(axis=(1, 3))
        return Raster(bounds, c, self.overflow, self.seed, dict(self.meta))


def rasterize(points: Iterable, nx: int, ny: int, bounds) -> Raster:
    """Bin points into a grid; points outside ``bounds`` go to ``overflow``.

    Cells are half-open except the last row and column, which include the
    upper bound.
    """
    if nx < 1 or ny < 1:
        raise ValueError("nx and ny must be at least 1")
    b = Bounds(*map(float, bounds))
    if isinstance(points, tuple) and len(points) == 2 and isinstance(points[0], np.ndarray):
        xs, ys = points
    else:
        pts = np.array([(float(p[0]), float(p[1])) for p in points], dtype=float).reshape(-1, 2)
        xs, ys = pts[:, 0], pts[:, 1]
    counts = np.zeros((ny, nx), dtype=np.int64)
    inside = (xs >= b.x0) & (xs <= b.x1) & (ys >= b.y0) & (ys <= b.y1)
    if b.x1 > b.x0:
        i = np.minimum(((xs[inside] - b.x0) / (b.x1 - b.x0) * nx).astype(np.int64), nx - 1)
    else:
        i = np.zeros(int(inside.sum()), dtype=np.int64)
    if b.y1 > b.y0:
        j = np.minimum(((ys[inside] - b.y0) / (b.y1 - b.y0) * ny).astype(np.int64), ny - 1)
    else:
        j = np.zeros(int(inside.sum()), dtype=np.int64)
    np.add.at(counts, (j, i), 1)
    return Raster(b, counts, int((~inside).sum()))


def padded_extent(lo: float, hi: float, pad: float = 0.05) -> tuple[float, float]:
    w = hi - lo
    if w <= 0:
        w = max(abs(lo), 1.0)
    return lo - pad * w, hi + pad * w


def default_bounds(alpha, lam: float = 1.0) -> Bounds:
    return Bounds(lam * (alpha - 1), lam * alpha, 0.0, 1.0)


def orbit_raster(alpha, seed_point, n: int, nx: int = 512, ny: int | None = None,
                 bounds=None, mode: str = "planar", burn_in: int = DEFAULT_BURN_IN,
                 lam: float = 1.0, seed: int | None = None) -> Raster:
    """Raster of ``n`` orbit points after ``burn_in`` transient steps.

    Without ``bounds``: planar alpha-CF orbits use [alpha-1, alpha] x [0, 1];
    otherwise x spans the map's interval and y the observed extent padded 5%.
    """
    alpha = float(alpha)
    ny = nx if ny is None else ny
    if nx < 1 or ny < 1:
        raise ValueError("nx and ny must be at least 1")
    x, y = (float(v) for v in seed_point)
    m = 0 if mode == "planar" else 1
    if bounds is None:
        if mode == "planar" and lam == 1.0:
            bounds = default_bounds(alpha)
        else:
            xs, ys = _kernels.planar_orbit(alpha, lam, x, y, n + burn_in, m, ZERO_FLOOR)
            ys = ys[burn_in:]
            if ys.size == 0:
                raise OrbitTerminated("orbit terminated during burn-in")
            bounds = Bounds(lam * (alpha - 1), lam * alpha, *padded_extent(ys.min(), ys.max()))
    b = Bounds(*map(float, bounds))
    counts = np.zeros((ny, nx), dtype=np.int64)
    reached, overflow = _kernels.planar_raster(alpha, lam, x, y, int(n), int(burn_in), m,
                                               b.x0, b.x1, b.y0, b.y1, counts, ZERO_FLOOR)
    meta = {"n": int(n), "burn_in": int(burn_in), "mode": mode, "reached": int(reached)}
    if reached < n + burn_in:
        meta["terminated_at"] = int(reached)
    return Raster(b, counts, int(overflow), seed, meta)


def orbit_raster_many(alpha, seed_points, n_each: int, nx: int, ny: int, bounds, **kw) -> Raster:
    """Merge rasters of independent orbits (cell-wise sum, input order)."""
    rasters = ordered_map(lambda p: orbit_raster(alpha, p, n_each, nx, ny, bounds, **kw),
                          seed_points)
    out = rasters[0]
    for r in rasters[1:]:
        out = out + r
    return out


# ---------------------------------------------------------------------------
# mu-area of occupied cells
# ---------------------------------------------------------------------------

def rectangle_mu(x0, x1, y0, y1):
    """Exact ``mu`` of a rectangle, from the antiderivative log(1 + xy)."""
    return (math.log1p(x1 * y1) - math.log1p(x0 * y1)
            - math.log1p(x1 * y0) + math.log1p(x0 * y0))


def cell_masses(bounds, nx: int, ny: int) -> np.ndarray:
    b = Bounds(*bounds)
    xs = np.linspace(b.x0, b.x1, nx + 1)
    ys = np.linspace(b.y0, b.y1, ny + 1)
    if np.any(1 + np.outer(ys, xs) <= 0):
        raise SingularityError("raster crosses the singular line 1 + xy = 0")
    F = np.log1p(np.outer(ys, xs))
    return F[1:, 1:] - F[1:, :-1] - F[:-1, 1:] + F[:-1, :-1]


def _occupancy(counts, masses, coverage_correction):
    occ = counts > 0
    m = masses[occ]
    total = float(m.sum())
    if not coverage_correction or total == 0:
        return total
    # Horvitz-Thompson: weight each hit cell by 1 / P(hit | inside)
    n = float(counts.sum())
    est = total
    for _ in range(200):
        new = float((m / -np.expm1(-n * m / est)).sum())
        if abs(new - est) <= 1e-13 * est:
            break
        est = new
    return new


def _block_ratio(counts, masses, block):
    """n * mu(B) / hits(B) over blocks B whose every cell was hit."""
    ny, nx = counts.shape[0] // block, counts.shape[1] // block
    if nx == 0 or ny == 0:
        return None, 0
    c = counts[: ny * block, : nx * block].reshape(ny, block, nx, block)
    m = masses[: ny * block, : nx * block].reshape(ny, block, nx, block)
    full = (c > 0).all(axis=(1, 3))
    hits_b = int(c.sum(axis=(1, 3))[full].sum())
    if hits_b == 0:
        return None, 0
    mass_b = float(m.sum(axis=(1, 3))[full].sum())
    return float(counts.sum() * mass_b / hits_b), hits_b


def mu_area(raster: Raster, method: str = "block", block: int = 32,
            coverage_correction: bool = False, min_block_share: float = 0.05) -> Estimate:
    """Estimate ``mu(Omega)`` from a raster of a ``mu``-typical orbit.

    ``method="occupancy"`` integrates ``mu`` exactly over every hit cell
    (optionally reweighted for cells missed by sampling).  ``method="block"``
    uses the orbit's own statistics: on blocks of ``block x block`` cells that
    were all hit, the fraction of hits equals ``mu(B)/mu(Omega)``.  This is
    insensitive to structure finer than a cell, which biases occupancy
    upward.  If fully-hit blocks hold less than ``min_block_share`` of the
    hits, the block size is halved (down to 4) before falling back to
    coverage-corrected occupancy.

    The error bar combines Poisson noise in the hit count with the change
    under a 2x2 coarsening of the raster.
    """
    if raster.hits == 0 and method != "occupancy":
        raise ValueError("cannot estimate an area from an empty raster")
    masses = cell_masses(raster.bounds, raster.nx, raster.ny)
    coarse = raster.coarsen() if min(raster.nx, raster.ny) >= 2 else None
    samples = max(raster.hits, 1)

    if method == "occupancy":
        value = _occupancy(raster.counts, masses, coverage_correction)
        stderr = 0.0
        if coarse is not None:
            cm = cell_masses(coarse.bounds, coarse.nx, coarse.ny)
            stderr = abs(value - _occupancy(coarse.counts, cm, coverage_correction))
        label = "occupancy+coverage" if coverage_correction else "occupancy"
        return Estimate(value, stderr, samples, raster.seed, label)
    if method != "block":
        raise ValueError(f"unknown method {method!r}")

    b = block
    while b >= 4:
        value, hits_b = _block_ratio(raster.counts, masses, b)
        if value is not None and hits_b >= min_block_share * raster.hits:
            break
        b //= 2
    else:
        est = mu_area(raster, "occupancy", coverage_correction=True)
        return Estimate(est.value, est.stderr, est.samples, est.seed, "occupancy+coverage (fallback)")
    stderr = value / math.sqrt(hits_b)
    if coarse is not None and b >= 2:
        cm = cell_masses(coarse.bounds, coarse.nx, coarse.ny)
        cval, _ = _block_ratio(coarse.counts, cm, b // 2)
        if cval is not None:
            stderr = math.hypot(stderr, value - cval)
    return Estimate(value, stderr, samples, raster.seed, f"block{b}")


# ---------------------------------------------------------------------------
# topology of the occupied region
# ---------------------------------------------------------------------------

def occupied_region(raster: Raster) -> np.ndarray:
    """Hit mask with single-cell sampling holes closed (2x2 closing)."""
    mask = raster.counts > 0
    padded = np.pad(mask, 2)
    closed = ndimage.binary_closing(padded, structure=np.ones((2, 2), bool))[2:-2, 2:-2]
    return mask | closed


def count_components(raster: Raster, min_fraction: float = 1e-3) -> int:
    """4-connected components of the occupied region.

    Components with fewer than ``min_fraction`` of the region's cells are
    treated as isolated sampling specks and not counted.
    """
    region = occupied_region(raster)
    labels, n = ndimage.label(region)
    if n == 0:
        return 0
    sizes = np.bincount(labels.ravel())[1:]
    return int((sizes >= min_fraction * region.sum()).sum())


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def pgm_bytes(raster: Raster) -> bytes:
    """Binary P5 image: log-scaled hit counts, top row = largest y."""
    c = raster.counts[::-1].astype(float)
    top = c.max()
    if top > 0:
        img = np.rint(255.0 * np.log1p(c) / math.log1p(top)).astype(np.uint8)
    else:
        img = np.zeros(c.shape, dtype=np.uint8)
    header = f"P5\n{raster.nx} {raster.ny}\n255\n".encode("ascii")
    return header + img.tobytes()


def write_pgm(raster: Raster, path) -> None:
    with open(path, "wb") as fh:
        fh.write(pgm_bytes(raster))


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM file")
    nx, ny = map(int, parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(ny, nx)


def points_csv(points) -> str:
    lines = ["n,x,y"]
    for k, (x, y) in enumerate(points, start=1):
        lines.append(f"{k},{_fmt(x)},{_fmt(y)}")
    return "\n".join(lines) + "\n"


def write_points_csv(points, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(points_csv(points))


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)
