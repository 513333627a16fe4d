"""Command line: ``geoflow <subcommand> ...``.

Exit codes: 0 success; 1 usage or domain error, or a verification
counterexample; 2 a report outside its tolerance.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from geoflow import __version__
from geoflow.cf import DegenerateTruncation, DomainError, OrbitTerminated, expand, reconstruct
from geoflow.ergodic import combined_agreement, entropy_area_report, kac_return_mean, rokhlin_entropy
from geoflow.haar import liouville_volume
from geoflow.natext import (Orbit, count_components, orbit_array, orbit_raster, pgm_bytes,
                            points_csv)
from geoflow import suites
from geoflow.rosen import hecke_entropy_report

DEFAULTS = {"n": 1_000_000, "resolution": 512, "seed": 42, "tol": 0.01}
FIGURE_SEED = (math.e / 10, 0.0)

EXIT_OK, EXIT_USAGE, EXIT_TOLERANCE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_number(text: str):
    """``"7/10"`` and integers are exact; decimals are floats."""
    s = text.strip()
    try:
        if "/" in s:
            return Fraction(s)
        if any(c in s for c in ".eE") or s.lower() in ("inf", "nan"):
            v = float(s)
            if not math.isfinite(v):
                raise ValueError
            return v
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def parse_exact(text: str) -> Fraction:
    """Any decimal or ``p/q`` read as an exact rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _count(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("counts must be non-negative")
    return v


def _num_out(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    return float(v)


def _emit(text: str, path=None, binary: bytes | None = None):
    if path and path != "-":
        if binary is not None:
            with open(path, "wb") as fh:
                fh.write(binary)
        else:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _config(args, *keys) -> dict:
    return {k: getattr(args, k) for k in keys}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def run_expand(args) -> int:
    exp = expand(args.alpha, args.x, args.n)
    convergents = []
    for k in range(1, len(exp.digits) + 1):
        try:
            convergents.append(_num_out(reconstruct(exp, k)))
        except DegenerateTruncation:
            convergents.append(None)
    if args.format == "csv":
        lines = ["k,eps,d,convergent"]
        for k, (dig, c) in enumerate(zip(exp.digits, convergents), start=1):
            lines.append(f"{k},{dig.eps},{dig.d},{'' if c is None else c}")
        _emit("\n".join(lines) + "\n", args.output)
    else:
        _emit(_dump({
            "alpha": _num_out(args.alpha), "x": _num_out(args.x), "n": args.n,
            "d0": exp.d0, "digits": [[d.eps, d.d] for d in exp.digits],
            "terminated": exp.terminated, "convergents": convergents,
        }), args.output)
    return EXIT_OK


def run_orbit(args) -> int:
    exact = isinstance(args.x, Fraction) and isinstance(args.y, Fraction)
    if exact:
        orb = Orbit(args.alpha, (args.x, args.y), args.n, args.mode)
        points = [(_num_out(p.x), _num_out(p.y)) for p in orb]
        stopped = orb.terminated_at
    else:
        xs, ys = orbit_array(float(args.alpha), (float(args.x), float(args.y)), args.n, args.mode)
        points = list(zip(xs.tolist(), ys.tolist()))
        stopped = len(points) if len(points) < args.n else None
    if args.format == "json":
        _emit(_dump({"alpha": _num_out(args.alpha), "mode": args.mode, "n": args.n,
                     "terminated_at": stopped, "points": [list(p) for p in points]}), args.output)
    else:
        _emit(points_csv(points), args.output)
    return EXIT_OK


def _figure_raster(args):
    from geoflow.variants import variant_raster
    if args.variant == "alpha":
        return orbit_raster(float(args.alpha), FIGURE_SEED, args.n, args.resolution,
                            burn_in=args.burn_in, seed=args.seed)
    return variant_raster(args.variant, float(args.alpha), FIGURE_SEED, args.n,
                          args.resolution, burn_in=args.burn_in, seed=args.seed)


def _figure_summary(args, raster) -> dict:
    return {
        "variant": args.variant, "alpha": _num_out(args.alpha), "n": args.n,
        "seed": args.seed, "resolution": args.resolution, "burn_in": args.burn_in,
        "bounds": list(raster.bounds), "hits": raster.hits, "overflow": raster.overflow,
        "components": count_components(raster), "output": args.output,
    }


def run_figure(args) -> int:
    raster = _figure_raster(args)
    if args.output and args.output != "-":
        _emit("", args.output, binary=pgm_bytes(raster))
        sys.stdout.write(_dump(_figure_summary(args, raster)))
    else:
        sys.stdout.buffer.write(pgm_bytes(raster))
    return EXIT_OK


def run_verify(args) -> int:
    if args.suite in ("flow", "commute", "haar", "rosen") and args.n < 1:
        raise UsageError("verify needs --n >= 1")
    if args.suite == "flow":
        res = suites.flow_suite(args.alpha, args.n, args.seed)
    elif args.suite == "commute":
        res = suites.commute_suite(args.alpha, args.n, args.seed)
    elif args.suite == "haar":
        res = suites.haar_suite(args.n, args.seed)
    elif args.suite == "fib":
        res = suites.fib_suite()
    else:
        res = suites.rosen_suite(args.q, args.n, args.seed, args.alpha)
    out = res.to_dict()
    out["config"] = _config(args, "seed", "n") | {"alpha": _num_out(args.alpha)}
    _emit(_dump(out), args.output)
    if not res.ok:
        sys.stderr.write(f"counterexample: {res.first_failure!r}\n")
        return EXIT_USAGE
    return EXIT_OK


def _report_exit(obj, rel_error, tol, args) -> int:
    obj["tol"] = tol
    obj["pass"] = bool(rel_error <= tol)
    _emit(_dump(obj), args.output)
    return EXIT_OK if obj["pass"] else EXIT_TOLERANCE


def run_report(args) -> int:
    kind = args.kind
    if kind == "volume":
        est = liouville_volume(args.resolution)
        target = math.pi ** 2 / 3
        rel = abs(est.value - target) / target
        return _report_exit({"report": "volume", "value": est.value, "stderr": est.stderr,
                             "target": target, "rel_error": rel, "resolution": args.resolution,
                             "config": _config(args, "resolution")}, rel, args.tol, args)
    if kind == "entropy-area":
        rep = entropy_area_report(float(args.alpha), args.n, args.resolution, args.seed)
        obj = rep.to_dict()
        obj["config"] = _config(args, "n", "resolution", "seed", "tol")
        return _report_exit(obj, rep.rel_error, args.tol, args)
    if kind == "rosen":
        rep = hecke_entropy_report(args.q, float(args.alpha), args.n, args.resolution, args.seed)
        obj = rep.to_dict()
        obj["config"] = _config(args, "q", "n", "resolution", "seed", "tol")
        return _report_exit(obj, rep.rel_error, args.tol, args)
    if kind == "kac":
        h = rokhlin_entropy(float(args.alpha), args.n, args.seed)
        k = kac_return_mean(float(args.alpha), args.n, args.seed, independent=args.independent)
        z = combined_agreement(h, k)
        obj = {"report": "kac", "alpha": _num_out(args.alpha), "kac": k.value,
               "kac_stderr": k.stderr, "h_hat": h.value, "h_stderr": h.stderr,
               "agreement_sigma": z, "independent": args.independent, "n": args.n,
               "seed": args.seed, "config": _config(args, "n", "seed", "tol")}
        # tolerance is in units of combined standard error here
        obj["rel_error"] = abs(k.value - h.value) / h.value
        obj["tol_sigma"] = 2.0
        obj["pass"] = bool(z <= 2.0)
        _emit(_dump(obj), args.output)
        return EXIT_OK if obj["pass"] else EXIT_TOLERANCE
    # figure
    raster = _figure_raster(args)
    summary = _figure_summary(args, raster)
    if args.output and args.output != "-":
        _emit("", args.output, binary=pgm_bytes(raster))
    sys.stdout.write(_dump(summary))
    return EXIT_OK


def run_nonfirst_demo(args) -> int:
    import numpy as np
    from geoflow.variants import DegenerateInput, partition_index, strip, tower_level, G_step

    rng = np.random.default_rng(args.seed)
    hist: dict[int, int] = {}
    in_strip = 0
    checked = 0
    for _ in range(args.n):
        x, y = float(rng.uniform(0, 1)), float(rng.uniform(0, 1))
        if x == 0:
            continue
        try:
            n, top = tower_level((x, y))
            G_step((x, y))
        except (DegenerateInput, OrbitTerminated):
            continue
        hist[n] = hist.get(n, 0) + 1
        if n >= 2:
            checked += 1
            in_strip += top.y in strip(n)
    strips = {str(n): [str(strip(n).lo), str(strip(n).hi)] for n in range(2, args.max_index + 1)}
    obj = {"n": args.n, "seed": args.seed,
           "partition_counts": {str(k): hist[k] for k in sorted(hist)},
           "tower_tops_in_strip": in_strip, "tower_tops_checked": checked,
           "strips": strips}
    _emit(_dump(obj), args.output)
    return EXIT_OK if in_strip == checked else EXIT_TOLERANCE


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    d = DEFAULTS
    p = _Parser(prog="geoflow", description="alpha-continued fractions, natural extensions "
                "and cross-sections of the modular geodesic flow",
                epilog=f"defaults: n={d['n']}, resolution={d['resolution']}, seed={d['seed']}, "
                       f"tol={d['tol']}; GEOFLOW_THREADS caps worker threads")
    p.add_argument("--version", action="version", version=f"geoflow {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, alpha=True, n=None, seed=True, output=True):
        if alpha:
            sp.add_argument("--alpha", type=parse_number, default=Fraction(1),
                            help="alpha in (0, 1]; 'p/q' for exact mode (default 1)")
        if n is not None:
            sp.add_argument("--n", type=_count, default=n, help=f"sample/step count (default {n})")
        if seed:
            sp.add_argument("--seed", type=int, default=d["seed"], help=f"RNG seed (default {d['seed']})")
        if output:
            sp.add_argument("-o", "--output", default=None, help="output path (default stdout)")

    e = sub.add_parser("expand", help="alpha-expansion digits and convergents")
    common(e, n=10, seed=False)
    e.add_argument("--x", type=parse_number, required=True)
    e.add_argument("--format", choices=("json", "csv"), default="json")
    e.set_defaults(func=run_expand)

    o = sub.add_parser("orbit", help="orbit of the planar natural extension")
    common(o, n=100, seed=False)
    o.add_argument("--x", type=parse_number, required=True)
    o.add_argument("--y", type=parse_number, default=Fraction(0))
    o.add_argument("--mode", choices=("planar", "sigma"), default="planar")
    o.add_argument("--format", choices=("csv", "json"), default="csv")
    o.set_defaults(func=run_orbit)

    def figure_args(sp):
        common(sp, n=200_000)
        sp.add_argument("--variant", choices=("alpha", "positive", "negative"), default="positive")
        sp.add_argument("--resolution", type=_count, default=d["resolution"])
        sp.add_argument("--burn-in", type=_count, default=100)

    f = sub.add_parser("figure", help="PGM raster of an orbit of (e/10, 0)")
    figure_args(f)
    f.set_defaults(func=run_figure)

    v = sub.add_parser("verify", help="sampled identity suites")
    v.add_argument("--suite", choices=("flow", "commute", "haar", "fib", "rosen"), required=True)
    v.add_argument("--alpha", type=parse_exact, default=None,
                   help="alpha, read exactly (default 1; 1/2 for --suite rosen)")
    v.add_argument("--q", type=int, default=3)
    v.add_argument("--n", type=_count, default=1000)
    v.add_argument("--seed", type=int, default=d["seed"])
    v.add_argument("-o", "--output", default=None)
    v.set_defaults(func=run_verify)

    r = sub.add_parser("report", help="numerical certificates (JSON)")
    rs = r.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    for name in ("entropy-area", "kac", "rosen"):
        sp = rs.add_parser(name)
        common(sp, n=d["n"])
        sp.add_argument("--resolution", type=_count, default=d["resolution"])
        sp.add_argument("--tol", type=float, default=d["tol"])
        if name == "rosen":
            sp.add_argument("--q", type=int, default=3)
            sp.set_defaults(alpha=Fraction(1, 2))
        if name == "kac":
            sp.add_argument("--independent", action="store_true",
                            help="run the return-map orbit from an independent start")
    vol = rs.add_parser("volume")
    vol.add_argument("--resolution", type=_count, default=1024)
    vol.add_argument("--tol", type=float, default=d["tol"])
    vol.add_argument("-o", "--output", default=None)
    fig = rs.add_parser("figure")
    figure_args(fig)
    r.set_defaults(func=run_report)

    nf = sub.add_parser("nonfirst-demo", help="the tower construction over the Gauss map")
    nf.add_argument("--n", type=_count, default=10_000)
    nf.add_argument("--seed", type=int, default=d["seed"])
    nf.add_argument("--max-index", type=int, default=12)
    nf.add_argument("-o", "--output", default=None)
    nf.set_defaults(func=run_nonfirst_demo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "verify" and args.alpha is None:
        args.alpha = Fraction(1, 2) if args.suite == "rosen" else Fraction(1)
    try:
        return args.func(args)
    except (DomainError, UsageError, ValueError, TypeError, OrbitTerminated, ZeroDivisionError) as exc:
        sys.stderr.write(f"geoflow: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
