"""Command line entry point: ``symatch <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bench
from .decoders import VARIANTS

EXIT_CONFIG = 2


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _bp_config(args) -> dict:
    cfg = {}
    for key in ("max_iters", "ms_scaling_factor", "prior"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key.replace("_", "-")] = val
    return cfg


def cmd_codes(args) -> int:
    from .registry import ENTRIES, get_code

    rows = []
    for e in ENTRIES:
        code = get_code(e.name if e.family_size is None else f"{e.name}{e.family_size}")
        rows.append({"name": code.name, "aliases": list(e.aliases), "category": e.category,
                     "shape": list(e.shape), "n": code.n, "k": code.k, "k_listed": e.k,
                     "d": e.d, "note": e.note})
    if args.emit == "json":
        print(json.dumps(rows, indent=2))
        return 0
    print(f"{'name':<8} {'n':>4} {'k':>3} {'d':>3}  shape        category")
    for r in rows:
        flag = "" if r["k"] == r["k_listed"] else f"  (listed k={r['k_listed']})"
        shape = "(" + ",".join(map(str, r["shape"])) + ")"
        print(f"{r['name']:<8} {r['n']:>4} {r['k']:>3} {r['d'] or '?':>3}  {shape:<12} "
              f"{r['category']}{flag}")
    return 0


def _write(doc, out, fmt):
    if out:
        bench.emit_results(doc, out, fmt)
        print(f"wrote {out}", file=sys.stderr)
    else:
        sys.stdout.write(bench.to_csv(doc) if fmt == "csv" else bench.to_json(doc))


def cmd_sweep(args) -> int:
    spec = bench.SweepSpec(args.code, args.decoder, tuple(args.p), args.shots, args.seed,
                           args.mode, _bp_config(args))
    points = bench.run_sweep(spec, args.workers)
    _write(bench.make_document(spec, points), args.out, args.format)
    return 0


def cmd_exhaust(args) -> int:
    spec = bench.ExhaustSpec(args.code, args.decoder, args.weight, args.direction, args.budget,
                             args.extended, _bp_config(args))
    records = bench.run_exhaustive(spec, args.workers)
    _write(bench.make_document(spec, records), args.out, args.format)
    return 0


def cmd_symmetries(args) -> int:
    from .cylinder import DIRECTIONS, direction_context
    from .registry import get_code
    from .symmetry import discover_symmetries_gauss, discover_symmetries_kernel, even_parity_ok, span_equal

    code = get_code(args.code)
    gauss = discover_symmetries_gauss(code)
    kern = discover_symmetries_kernel(code)
    same = span_equal(np.array([s.sites for s in gauss]).reshape(-1, code.sites),
                      np.array([s.sites for s in kern]).reshape(-1, code.sites))
    report = {"code": code.name, "n": code.n, "k": code.k, "symmetries": len(gauss),
              "gauss_kernel_agree": bool(same), "even_parity": bool(even_parity_ok(code, gauss)),
              "sizes": [int(s.size) for s in gauss], "directions": {}}
    for d in DIRECTIONS:
        ctx = direction_context(code, d)
        report["directions"][d] = {"K": ctx.K, "doublings": ctx.doublings,
                                   "working_shape": [ctx.work.shape.M, ctx.work.shape.N, ctx.work.shape.alpha],
                                   "logical_weights": [int(x) for x in ctx.logicals_base.sum(axis=1)]}
    if args.emit == "json":
        print(json.dumps(report, indent=2))
    else:
        print(f"{code.name}: {report['symmetries']} independent Z-symmetries "
              f"(gauss/kernel agree: {same}, even parity: {report['even_parity']})")
        print(f"  sizes: {report['sizes']}")
        for d, r in report["directions"].items():
            print(f"  {d}: K={r['K']} doublings={r['doublings']} working torus {tuple(r['working_shape'])} "
                  f"logical weights {r['logical_weights']}")
    return 0


def cmd_topology(args) -> int:
    from .registry import get_code
    from .topology import TorusTooLarge, anyon_analysis, unfrustrated_torus

    code = get_code(args.code)
    basis = anyon_analysis(code)
    report = {"code": code.name, "K": basis.K, "Rx": basis.Rx, "Ry": basis.Ry,
              "symmetryCount": None, "torus": None, "ribbon_width": basis.width}
    try:
        u = unfrustrated_torus(code, basis)
        report["symmetryCount"] = u.symmetry_count
        report["torus"] = [u.shape.M, u.shape.N]
    except TorusTooLarge as exc:
        report["note"] = str(exc)
    print(json.dumps(report, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="symatch", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("codes", help="registry of named codes")
    p.add_argument("action", choices=["list"])
    p.add_argument("--emit", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_codes)

    def common(p):
        p.add_argument("--code", required=True)
        p.add_argument("--decoder", default="symatch",
                       help="comma-separated variants: " + ", ".join(VARIANTS))
        p.add_argument("--out")
        p.add_argument("--format", choices=["json", "csv"], default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--max-iters", type=int, dest="max_iters")
        p.add_argument("--ms-scaling-factor", type=float, dest="ms_scaling_factor")
        p.add_argument("--prior", help="BP prior, e.g. 0.02 or 3/144")

    p = sub.add_parser("sweep", help="Monte Carlo logical error rates")
    common(p)
    p.add_argument("--p", type=_floats, required=True)
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=bench.FAILURE_MODES, default="any-logical")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("exhaust", help="decode every error of one weight")
    common(p)
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--direction", choices=["vertical", "horizontal", "both"], default="both")
    p.add_argument("--budget", type=int, default=bench.DEFAULT_BUDGET)
    p.add_argument("--extended", action="store_true", help="allow runs above the budget")
    p.set_defaults(func=cmd_exhaust)

    p = sub.add_parser("symmetries", help="symmetries and cylinder logicals of a code")
    p.add_argument("--code", required=True)
    p.add_argument("--emit", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_symmetries)

    p = sub.add_parser("topology", help="toric-code copies and translation orders")
    p.add_argument("--code", required=True)
    p.set_defaults(func=cmd_topology)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "format", None) is None and hasattr(args, "format"):
        args.format = "csv" if (args.out or "").lower().endswith(".csv") else "json"
    try:
        return args.func(args)
    except (bench.ConfigError, bench.BudgetExceeded, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"symatch: error: {msg}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
