"""Command-line interface.

Exit codes: 0 success/PASS, 1 verdict FAIL, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .asymptotics import WHITEHEAD_VOLUME, fit_asymptotic, ratio_conjecture_scan
from .cyclotomic import nonvanish_scan
from .jones import TorusKnotSpec
from .numeric import lobachevsky
from .sweep import Descriptor, RunConfig, parse_range, read_records, run_sweep, write_records

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

B_TARGETS = {"3pi": 3 * math.pi, "4pi": 4 * math.pi}


class UsageError(Exception):
    pass


def _descriptor(args) -> Descriptor:
    try:
        return Descriptor(args.knot, args.p, args.q, args.r)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_eval(args) -> int:
    desc = _descriptor(args)
    if args.N < 1:
        raise UsageError("N must be >= 1")
    cfg = RunConfig.resolve(threads=1, fmt=args.format, use_cache=False)
    records, _ = run_sweep(desc, [args.N], cfg)
    write_records(records, sys.stdout, cfg.fmt)
    return EXIT_OK


def cmd_sweep(args) -> int:
    desc = _descriptor(args)
    try:
        Ns = parse_range(args.N)
        cfg = RunConfig.resolve(args.threads, args.cache_dir, args.format, use_cache=not args.no_cache)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    records, stats = run_sweep(desc, Ns, cfg)
    try:
        if args.out == "-":
            write_records(records, sys.stdout, cfg.fmt)
        else:
            with open(args.out, "w", newline="") as fh:
                write_records(records, fh, cfg.fmt)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"records: {len(records)}  cache hits: {stats['cache_hits']}  evaluated: {stats['evaluated']}", file=sys.stderr)
    return EXIT_OK


def _verdicts(fit, args) -> list[dict]:
    out = []
    if args.target == "whitehead-volume":
        err = abs(fit.a - WHITEHEAD_VOLUME)
        tol = args.a_tol * WHITEHEAD_VOLUME
        out.append({"check": "a ~ 8 L(pi/4)", "value": fit.a, "target": WHITEHEAD_VOLUME, "tol": tol, "pass": err <= tol})
    elif args.target == "zero":
        out.append({"check": "a ~ 0", "value": fit.a, "target": 0.0, "tol": args.zero_tol, "pass": abs(fit.a) <= args.zero_tol})
    if args.b_target:
        bt = B_TARGETS[args.b_target]
        tol = args.b_tol * bt
        out.append({"check": f"b ~ {args.b_target}", "value": fit.b, "target": bt, "tol": tol, "pass": abs(fit.b - bt) <= tol})
        other = min((v for k, v in B_TARGETS.items() if k != args.b_target))
        out.append(
            {
                "check": f"b closer to {args.b_target} than the alternative",
                "value": fit.b,
                "target": bt,
                "tol": None,
                "pass": abs(fit.b - bt) < abs(fit.b - other),
            }
        )
    return out


def cmd_fit(args) -> int:
    try:
        with open(args.input, newline="") as fh:
            rows = read_records(fh)
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        raise UsageError(f"malformed CSV: {exc}") from exc
    points = [(row["N"], 2 * math.pi * row["log_abs"]) for row in rows]
    try:
        fit = fit_asymptotic(points)
    except Exception as exc:
        raise UsageError(f"cannot fit: {exc}") from exc
    verdicts = _verdicts(fit, args)
    out = fit.as_dict()
    out["verdicts"] = verdicts
    if args.format == "json":
        json.dump(out, sys.stdout, indent=1)
        sys.stdout.write("\n")
    else:
        print(f"a = {fit.a:.9f}")
        print(f"b = {fit.b:.9f}")
        print(f"c = {fit.c:.9f}")
        print(f"max_residual = {fit.max_residual:.3e}  rms_residual = {fit.rms_residual:.3e}  n_points = {fit.n_points}")
        for v in verdicts:
            tol = "" if v["tol"] is None else f" +- {v['tol']:.4g}"
            print(f"{'PASS' if v['pass'] else 'FAIL'}  {v['check']}: {v['value']:.6f} (target {v['target']:.6f}{tol})")
    return EXIT_OK if all(v["pass"] for v in verdicts) else EXIT_FAIL


def cmd_nonvanish(args) -> int:
    try:
        TorusKnotSpec(args.p, args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    sign = 1 if args.sign == "+" else -1
    report = nonvanish_scan(args.p, args.q, args.k, sign)
    print("N,exact_zero,float_abs")
    for N, z, mag in report.rows:
        print(f"{N},{'true' if z else 'false'},{mag:.6e}")
    print(report.summary())
    return EXIT_OK


def cmd_ratio(args) -> int:
    if not 0.5 < args.delta < 2.0 / 3.0:
        raise UsageError("delta must lie in (0.5, 0.667)")
    try:
        TorusKnotSpec(args.p, args.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.series:
        try:
            Ns = [int(x) for x in args.series.split(",") if x.strip()]
        except ValueError as exc:
            raise UsageError(f"bad --series: {exc}") from exc
    elif args.N:
        Ns = [args.N]
    else:
        raise UsageError("one of --N or --series is required")
    values = []
    for N in Ns:
        scan = ratio_conjecture_scan(args.p, args.q, N, args.delta, args.floor)
        values.append(scan.value)
        print(f"N={N} delta={args.delta} value={scan.value:.6e} window={scan.n_window} excluded={scan.excluded}")
    if len(values) > 1:
        ok = all(b < a for a, b in zip(values, values[1:]))
        print(f"{'PASS' if ok else 'FAIL'}  trend: {'strictly decreasing' if ok else 'not strictly decreasing'}")
        return EXIT_OK if ok else EXIT_FAIL
    return EXIT_OK


def cmd_volume(args) -> int:
    import mpmath

    print(f"8*L(pi/4) = {8 * lobachevsky(math.pi / 4, 1e-15):.16f}")
    with mpmath.workdps(args.digits + 10):
        v = 4 * mpmath.catalan
        print(f"8*L(pi/4) to {args.digits} digits = {mpmath.nstr(v, args.digits)}")
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    from .checks import run_selfcheck

    ok = True
    for name, passed, detail in run_selfcheck():
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
    return EXIT_OK if ok else EXIT_FAIL


def _add_knot_args(p):
    p.add_argument("--knot", required=True, choices=["wl", "wd", "torus"])
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--r", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="volconj", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one invariant at t = exp(2 pi i/N)")
    _add_knot_args(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="evaluate over a range of N with caching")
    _add_knot_args(p)
    p.add_argument("--N", required=True, help="start:end:step (inclusive)")
    p.add_argument("--out", required=True, help="output path, or - for stdout")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--threads", type=int, default=None, help="worker processes (default: $VOLCONJ_THREADS or core count)")
    p.add_argument("--cache-dir", default=None, help="cache directory (default: $VOLCONJ_CACHE_DIR or ~/.cache/volconj)")
    p.add_argument("--no-cache", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="fit 2 pi log|J| = a N + b log N + c")
    p.add_argument("input")
    p.add_argument("--target", choices=["whitehead-volume", "zero"])
    p.add_argument("--b-target", choices=sorted(B_TARGETS))
    p.add_argument("--a-tol", type=float, default=0.005, help="relative tolerance on a for whitehead-volume")
    p.add_argument("--zero-tol", type=float, default=0.01, help="absolute tolerance on a for zero")
    p.add_argument("--b-tol", type=float, default=0.1, help="relative tolerance on b")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("nonvanish", help="exact vanishing scan of A_{p,q}(N,k) over one period")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, choices=[0, 1], default=1)
    p.add_argument("--sign", choices=["+", "-"], default="+")
    p.set_defaults(func=cmd_nonvanish)

    p = sub.add_parser("ratio", help="N^2 * max |hatJ / t d/dt hatJ| near n = N/2")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--N", type=int)
    p.add_argument("--series", help="comma-separated N values")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--floor", type=float, default=1e-12, help="relative floor for excluded denominators")
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("volume", help="print 8 L(pi/4)")
    p.add_argument("--digits", type=int, default=30)
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("selfcheck", help="run the exact-vs-float and identity checks")
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
