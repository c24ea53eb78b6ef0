"""Command-line driver.

Subcommands wrap the library modules with deterministic file I/O: identical
flags give byte-identical CSV output, numbers are written with 17
significant digits, and an optional flat JSON config file supplies defaults
(explicit flags win; environment variables are ignored by design).

Exit codes: 0 ok, 1 bad configuration, 2 resource limit, 3 failed
assertion or verification.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .counterexample import (compute_epsilons, crossing_consistency,
                             verify_drop_gap, verify_incidences)
from .errors import (CoincidentPointsError, ConfigError, GeometryError,
                     ResourceLimitError, SnapRadiusError)
from .halfplane import HPoint, from_klein, to_klein
from .hull import (DEFAULT_MAX_POINTS, kantorovich_hull, read_cloud_csv,
                   slice_cloud, write_cloud_csv, write_slice_csv)
from .separator import (build_separator, read_function_csv, verify_separator,
                        write_function_csv)
from .spaces import make_space, run_axiom_suite

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RESOURCE = 2
EXIT_ASSERT = 3

SPACE_IDS = ("e1", "e2", "e3", "h2", "h2xr", "e2xr")

_REQUIRED = object()


class _Parser(argparse.ArgumentParser):
    # flag mistakes are configuration errors, exit 1 (argparse default is 2)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _fmt(v: float) -> str:
    return format(v, ".17g")


def _parse_rows(text: str, width: int, what: str) -> list[list[float]]:
    rows = []
    for tok in text.split(";"):
        tok = tok.strip()
        if not tok:
            continue
        try:
            vals = [float(c) for c in tok.split(",")]
        except ValueError:
            raise ConfigError(f"bad {what} literal {tok!r}") from None
        if len(vals) != width:
            raise ConfigError(
                f"{what} point {tok!r} has {len(vals)} coordinates, "
                f"expected {width}")
        rows.append(vals)
    if not rows:
        raise ConfigError(f"no {what} points given")
    return rows


def _merge_config(args, parser, spec: dict) -> None:
    """Fill unset options from the JSON config file, then from built-in
    defaults.  Precedence: explicit flag > config key > default."""
    cfg = {}
    path = getattr(args, "config", None)
    if path:
        try:
            with open(path) as f:
                cfg = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config {path}: {exc}")
        if not isinstance(cfg, dict):
            parser.error(f"config {path} must be a flat JSON object")
        unknown = sorted(set(cfg) - set(spec))
        if unknown:
            parser.error(f"unknown config keys: {', '.join(unknown)}")
    for dest, (default, conv) in spec.items():
        if getattr(args, dest, None) is not None:
            continue
        val = cfg.get(dest, default)
        if val is _REQUIRED:
            parser.error(f"missing required option --{dest.replace('_', '-')}")
        if val is not None and conv is not None:
            try:
                val = conv(val)
            except (TypeError, ValueError):
                parser.error(f"config key {dest}: bad value {val!r}")
        setattr(args, dest, val)


def _check_space(space_id: str):
    if space_id not in SPACE_IDS:
        raise ConfigError(
            f"unsupported space {space_id!r}; choose from "
            f"{', '.join(SPACE_IDS)}")
    return make_space(space_id)


# ---------------------------------------------------------------------------
# subcommands


def cmd_hull(args) -> int:
    if args.seeds and args.seeds_file:
        raise ConfigError("--seeds and --seeds-file are mutually exclusive")
    if args.seeds_file:
        cloud = read_cloud_csv(args.seeds_file)
        space = cloud.space
        if args.space and args.space != space.id:
            raise ConfigError(
                f"--space {args.space} conflicts with seeds file kind "
                f"{space.id}")
        _check_space(space.id)
        seeds = [space.from_row(row) for row in cloud.coords]
    elif args.seeds:
        if not args.space:
            raise ConfigError("--space is required with inline --seeds")
        space = _check_space(args.space)
        rows = _parse_rows(args.seeds, space.ncoords, "seed")
        seeds = [space.from_row(r) for r in rows]
    else:
        raise ConfigError("one of --seeds or --seeds-file is required")
    t0 = time.perf_counter()
    cloud = kantorovich_hull(space, seeds, args.iterations, args.res,
                             args.dedup_tol, max_points=args.max_points,
                             threads=args.threads, engine=args.engine)
    elapsed = time.perf_counter() - t0
    write_cloud_csv(cloud, args.out)
    print(f"wrote {args.out}: {len(cloud)} points, "
          f"pass sizes {cloud.pass_sizes}, {elapsed:.3f} s")
    return EXIT_OK


def cmd_slice(args) -> int:
    if args.plane_tol < 0.0:
        raise ConfigError(f"--plane-tol must be >= 0, got {args.plane_tol}")
    cloud = read_cloud_csv(args.infile)
    if cloud.space.id != "h2xr":
        raise ConfigError(
            f"slice needs an h2xr cloud, {args.infile} holds {cloud.space.id}")
    rows = _parse_rows(args.plane, 2, "plane")
    if len(rows) != 2:
        raise ConfigError(f"--plane needs exactly two base points, "
                          f"got {len(rows)}")
    a = HPoint(*rows[0])
    b = HPoint(*rows[1])
    try:
        sh = slice_cloud(cloud, a, b, args.plane_tol)
    except CoincidentPointsError as exc:
        raise ConfigError(f"bad plane: {exc}") from None
    write_slice_csv(args.out, sh)
    print(f"wrote {args.out}: {sh.shape[0]} of {len(cloud)} points within "
          f"{args.plane_tol:g} of the plane through "
          f"({_fmt(a.x)},{_fmt(a.y)}) and ({_fmt(b.x)},{_fmt(b.y)})")
    return EXIT_OK


def cmd_counterexample(args) -> int:
    inc = verify_incidences()
    print(inc.to_text())
    eps1, eps2 = compute_epsilons()
    print(f"eps1 = {_fmt(eps1)} < 2/5 < eps2 = {_fmt(eps2)}")
    cons = crossing_consistency()
    cons_ok = cons <= 1e-9
    print(f"crossing consistency |(P,Q) blend - X1| = {cons:.3e} "
          f"({'ok' if cons_ok else 'FAIL'})")
    gap = verify_drop_gap(iterations=args.iterations, res=args.res,
                          delta=args.delta, base_window=args.base_window,
                          dedup_tol=args.dedup_tol,
                          max_points=args.max_points, engine=args.engine)
    print(gap.to_text())
    ok = inc.passed and cons_ok and gap.passed
    if args.json:
        rec = {"incidences": inc.to_record(),
               "epsilons": {"eps1": eps1, "eps2": eps2},
               "crossing_consistency": cons,
               "drop_gap": gap.to_record(),
               "passed": ok}
        with open(args.json, "w") as f:
            json.dump(rec, f, indent=2, sort_keys=True)
            f.write("\n")
    return EXIT_OK if ok else EXIT_ASSERT


def cmd_separate(args) -> int:
    if args.space not in ("e1", "e2", "h2"):
        raise ConfigError(
            f"separate works on base spaces e1, e2, h2; got {args.space}")
    space = make_space(args.space)
    f = read_function_csv(args.lower)
    g = read_function_csv(args.upper)
    t0 = time.perf_counter()
    result = build_separator(space, g, args.iterations, args.res,
                             args.snap_radius, dedup_tol=args.dedup_tol,
                             max_points=args.max_points, engine=args.engine)
    elapsed = time.perf_counter() - t0
    rep = verify_separator(space, f, g, result, args.t_steps, args.tol,
                           pair_budget=args.pair_budget, seed=args.seed)
    write_function_csv(args.out, result.phi)
    print(f"wrote {args.out}: {len(result.phi)} samples; hull cloud "
          f"{len(result.hull_cloud)} points, pass sizes "
          f"{result.hull_cloud.pass_sizes}, {elapsed:.3f} s; "
          f"max snap used {result.max_snap_used:.6g}")
    print(rep.to_text())
    if args.report:
        rec = rep.to_record()
        rec["hull_points"] = len(result.hull_cloud)
        rec["max_snap_used"] = result.max_snap_used
        with open(args.report, "w") as f2:
            json.dump(rec, f2, indent=2, sort_keys=True)
            f2.write("\n")
    return EXIT_OK if rep.passed else EXIT_ASSERT


def cmd_axioms(args) -> int:
    space = _check_space(args.space)
    if args.samples < 1:
        raise ConfigError(f"--samples must be >= 1, got {args.samples}")
    reports = run_axiom_suite(space, args.samples, args.seed)
    bad = 0
    for rep in reports:
        print(rep.to_text())
        bad += len(rep.violations)
    if args.json:
        with open(args.json, "w") as f:
            json.dump([rep.to_record() for rep in reports], f, indent=2,
                      sort_keys=True)
            f.write("\n")
    return EXIT_OK if bad == 0 else EXIT_ASSERT


_KIND_TO_KLEIN = {"h2": "klein", "h2xr": "kleinxr"}
_KIND_FROM_KLEIN = {v: k for k, v in _KIND_TO_KLEIN.items()}


def _convert_pair(x: float, y: float, to: str) -> tuple[float, float]:
    if to == "klein":
        if y <= 0.0:
            raise ConfigError(f"half-plane point ({x:g},{y:g}) needs y > 0")
        k = to_klein(HPoint(x, y))
        return k.u, k.v
    if x * x + y * y >= 1.0:
        raise ConfigError(
            f"Klein point ({x:g},{y:g}) must lie inside the unit disk")
    p = from_klein((x, y))
    return p.x, p.y


def cmd_convert(args) -> int:
    if args.points:
        for row in _parse_rows(args.points, 2, "input"):
            u, v = _convert_pair(row[0], row[1], args.to)
            print(f"{_fmt(u)},{_fmt(v)}")
        return EXIT_OK
    if not args.infile or not args.out:
        raise ConfigError("convert needs --points, or both --in and --out")
    import csv as _csv
    want = _KIND_TO_KLEIN if args.to == "klein" else _KIND_FROM_KLEIN
    with open(args.infile, newline="") as f:
        reader = _csv.reader(f)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:4]] != \
                ["kind", "x", "y", "h"]:
            raise ConfigError(f"{args.infile}: not a cloud CSV (bad header)")
        out_rows = []
        for i, row in enumerate(reader):
            if not row or not any(c.strip() for c in row):
                continue
            kind = row[0].strip()
            if kind not in want:
                raise ConfigError(
                    f"{args.infile} row {i + 2}: kind {kind!r} cannot be "
                    f"converted to {args.to} (expect one of "
                    f"{', '.join(sorted(want))})")
            try:
                x, y = float(row[1]), float(row[2])
            except (ValueError, IndexError) as exc:
                raise ConfigError(
                    f"{args.infile} row {i + 2}: {exc}") from None
            u, v = _convert_pair(x, y, args.to)
            rest = [c.strip() for c in row[3:]]
            out_rows.append(",".join([want[kind], _fmt(u), _fmt(v)] + rest))
    with open(args.out, "w", newline="") as f:
        f.write("kind,x,y,h,gen,parent1,parent2\n")
        f.write("".join(r + "\n" for r in out_rows))
    print(f"wrote {args.out}: {len(out_rows)} points in "
          f"{'Klein disk' if args.to == 'klein' else 'half-plane'} "
          "coordinates")
    return EXIT_OK


# ---------------------------------------------------------------------------
# wiring


def _engine_opts(sub) -> None:
    sub.add_argument("--dedup-tol", type=float, default=None, metavar="TOL",
                     help="duplicate-merge distance (default res/2; 0 "
                          "disables merging)")
    sub.add_argument("--max-points", type=int, default=None, metavar="N",
                     help=f"abort above this cloud size (default "
                          f"{DEFAULT_MAX_POINTS})")
    sub.add_argument("--threads", type=int, default=None, metavar="N",
                     help="worker cap; output is identical for every N "
                          "(default 1)")
    sub.add_argument("--engine", choices=("auto", "compiled", "python"),
                     default=None,
                     help="hull engine selection (default auto)")


def _engine_spec() -> dict:
    return {"dedup_tol": (None, float), "max_points": (DEFAULT_MAX_POINTS, int),
            "threads": (1, int), "engine": ("auto", str)}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="geohull",
                     description="Approximate geodesic convex hulls, the "
                                 "three-point counterexample pipeline, and "
                                 "convex separators.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("hull", help="run the segment-sampling hull iteration")
    p.add_argument("--space", choices=SPACE_IDS, default=None,
                   help="point space of the seeds")
    p.add_argument("--seeds", default=None, metavar="PTS",
                   help="inline seeds: points split by ';', coordinates by "
                        "','; extended spaces append the height last")
    p.add_argument("--seeds-file", default=None, metavar="CSV",
                   help="cloud CSV whose points become the seeds")
    p.add_argument("--iterations", type=int, default=None, metavar="K",
                   help="number of hull passes (required)")
    p.add_argument("--res", type=float, default=None, metavar="R",
                   help="segment sampling step (required)")
    p.add_argument("--out", default=None, metavar="CSV",
                   help="output cloud CSV path (required)")
    _engine_opts(p)
    p.add_argument("--config", default=None, metavar="JSON",
                   help="flat JSON file of flag defaults")
    p.set_defaults(func=cmd_hull, spec={
        "space": (None, str), "seeds": (None, str), "seeds_file": (None, str),
        "iterations": (_REQUIRED, int), "res": (_REQUIRED, float),
        "out": (_REQUIRED, str), **_engine_spec()})

    p = sub.add_parser("slice", help="cut an h2xr cloud along a vertical "
                                     "plane through two base points")
    p.add_argument("--in", dest="infile", default=None, metavar="CSV",
                   help="input cloud CSV (required)")
    p.add_argument("--plane", default=None, metavar="A;B",
                   help="two half-plane base points, e.g. '0,3;0,6.4' "
                        "(required)")
    p.add_argument("--plane-tol", type=float, default=None, metavar="TOL",
                   help="keep points within this base distance of the plane "
                        "(default 0.01)")
    p.add_argument("--out", default=None, metavar="CSV",
                   help="output slice CSV path (required)")
    p.add_argument("--config", default=None, metavar="JSON",
                   help="flat JSON file of flag defaults")
    p.set_defaults(func=cmd_slice, spec={
        "infile": (_REQUIRED, str), "plane": (_REQUIRED, str),
        "plane_tol": (0.01, float), "out": (_REQUIRED, str)})

    p = sub.add_parser("counterexample",
                       help="check the three-point configuration and the "
                            "height gap over x")
    p.add_argument("--iterations", type=int, default=None, metavar="K",
                   help="hull passes (default 2)")
    p.add_argument("--res", type=float, default=None, metavar="R",
                   help="sampling step (default 0.006)")
    p.add_argument("--delta", type=float, default=None, metavar="D",
                   help="coverage radius for X1/X2 (default 0.01)")
    p.add_argument("--base-window", type=float, default=None, metavar="W",
                   help="base radius around x for the gap scan "
                        "(default 0.01)")
    p.add_argument("--json", default=None, metavar="PATH",
                   help="also write the machine-readable report here")
    _engine_opts(p)
    p.add_argument("--config", default=None, metavar="JSON",
                   help="flat JSON file of flag defaults")
    p.set_defaults(func=cmd_counterexample, spec={
        "iterations": (2, int), "res": (0.006, float), "delta": (0.01, float),
        "base_window": (0.01, float), "json": (None, str), **_engine_spec()})

    p = sub.add_parser("separate",
                       help="build and verify a convex separator between "
                            "two sampled functions")
    p.add_argument("--space", default=None, choices=("e1", "e2", "h2"),
                   help="base space of the domain samples (default e1)")
    p.add_argument("--f", dest="lower", default=None, metavar="CSV",
                   help="lower sampled function (required)")
    p.add_argument("--g", dest="upper", default=None, metavar="CSV",
                   help="upper sampled function (required)")
    p.add_argument("--iterations", type=int, default=None, metavar="K",
                   help="hull passes over the lifted graph (default 2)")
    p.add_argument("--res", type=float, default=None, metavar="R",
                   help="sampling step (required)")
    p.add_argument("--snap-radius", type=float, default=None, metavar="S",
                   help="base radius of the envelope minimum (required)")
    p.add_argument("--t-steps", type=int, default=None, metavar="T",
                   help="samples per verification segment (default 11)")
    p.add_argument("--tol", type=float, default=None,
                   help="verification tolerance (default 0.05)")
    p.add_argument("--pair-budget", type=int, default=None, metavar="N",
                   help="random segment pairs to verify (default 200)")
    p.add_argument("--seed", type=int, default=None,
                   help="rng seed for verification pairs (default 0)")
    p.add_argument("--out", default=None, metavar="CSV",
                   help="output CSV for the separator values (required)")
    p.add_argument("--report", default=None, metavar="PATH",
                   help="also write the machine-readable report here")
    _engine_opts(p)
    p.add_argument("--config", default=None, metavar="JSON",
                   help="flat JSON file of flag defaults")
    p.set_defaults(func=cmd_separate, spec={
        "space": ("e1", str), "lower": (_REQUIRED, str),
        "upper": (_REQUIRED, str), "iterations": (2, int),
        "res": (_REQUIRED, float), "snap_radius": (_REQUIRED, float),
        "t_steps": (11, int), "tol": (0.05, float), "pair_budget": (200, int),
        "seed": (0, int), "out": (_REQUIRED, str), "report": (None, str),
        **_engine_spec()})

    p = sub.add_parser("axioms", help="run the ruler, betweenness, and "
                                      "incidence sample suites")
    p.add_argument("--space", default=None, choices=SPACE_IDS,
                   help="space to test (required)")
    p.add_argument("--samples", type=int, default=None, metavar="N",
                   help="samples per suite (default 1000)")
    p.add_argument("--seed", type=int, default=None,
                   help="rng seed (default 0)")
    p.add_argument("--json", default=None, metavar="PATH",
                   help="also write the machine-readable reports here")
    p.add_argument("--config", default=None, metavar="JSON",
                   help="flat JSON file of flag defaults")
    p.set_defaults(func=cmd_axioms, spec={
        "space": (_REQUIRED, str), "samples": (1000, int), "seed": (0, int),
        "json": (None, str)})

    p = sub.add_parser("convert", help="map points between half-plane and "
                                       "Klein disk coordinates")
    p.add_argument("--to", choices=("klein", "halfplane"), default=None,
                   help="target coordinates (required)")
    p.add_argument("--points", default=None, metavar="PTS",
                   help="inline x,y points split by ';', printed converted")
    p.add_argument("--in", dest="infile", default=None, metavar="CSV",
                   help="cloud CSV to convert (with --out)")
    p.add_argument("--out", default=None, metavar="CSV",
                   help="converted CSV path (with --in)")
    p.add_argument("--config", default=None, metavar="JSON",
                   help="flat JSON file of flag defaults")
    p.set_defaults(func=cmd_convert, spec={
        "to": (_REQUIRED, str), "points": (None, str),
        "infile": (None, str), "out": (None, str)})

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "command", None):
        parser.print_help()
        return EXIT_CONFIG
    _merge_config(args, parser, args.spec)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except SnapRadiusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GeometryError as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
