"""Command-line interface: a single executable dispatching to every module,
with deterministic CSV/JSON emission, flat key=value config files, and
optional plot-script generation.

Determinism contract: for identical flags and seed, the emitted data files
are byte-identical (different --threads included; computations are run on a
single thread with fixed reduction shapes). Run metadata, including wall
time, goes to stderr only, so it never perturbs the data files. The
`seconds` CSV column is populated only under --timing for the same reason.

Exit codes: 0 success, 2 usage error, 3 guard violation (the guard name is
printed), 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__, decouple, expsum, meanvalue, pairs, planner, zeta
from .errors import GuardError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_GUARD = 3
EXIT_IO = 4

SCHEMA_VERSION = 1
THREADS_ENV = "ZETALAB_THREADS"

MEANVALUE_COLUMNS = (
    "method", "N", "r", "delta", "Delta", "window3", "window4", "value", "stderr", "seconds",
)
DECOUPLE_COLUMNS = ("d", "N", "ensemble", "lhs", "rhs", "ratio", "stderr", "samples", "seed")
ZETA_COLUMNS = ("t", "abs_zeta", "ratio_13_84", "abs_err")
ENVELOPE_COLUMNS = ("alpha_num", "alpha_den", "p_num", "p_den", "witness")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


@dataclass
class Report:
    """Rows plus metadata; the emitter turns this into CSV or JSON."""

    columns: tuple[str, ...]
    rows: list[tuple]
    meta: dict = field(default_factory=dict)
    text: list[str] = field(default_factory=list)


def _csv_text(report: Report) -> str:
    lines = [",".join(report.columns)]
    for row in report.rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_text(report: Report) -> str:
    payload = {
        "schema": SCHEMA_VERSION,
        "meta": report.meta,
        "columns": list(report.columns),
        "rows": [
            dict(zip(report.columns, [None if _fmt(v) == "" else v for v in row]))
            for row in report.rows
        ],
    }
    return json.dumps(payload, indent=1, default=str) + "\n"


_PLOT_TEMPLATE = """\
#!/usr/bin/env python3
# Generated plot script; reads {data!r} (columns: {cols}).
import csv

import matplotlib.pyplot as plt

xs, ys = [], []
with open({data!r}) as fh:
    for row in csv.DictReader(fh):
        try:
            xs.append(float(row[{xcol!r}]))
            ys.append(float(row[{ycol!r}]))
        except (KeyError, ValueError):
            continue
plt.plot(xs, ys, marker="o")
plt.xscale("log")
plt.yscale("log")
plt.xlabel({xcol!r})
plt.ylabel({ycol!r})
plt.savefig({data!r} + ".png", dpi=150)
print("wrote", {data!r} + ".png")
"""


def emit(report: Report, args) -> None:
    fmt = args.format
    text = _csv_text(report) if fmt == "csv" else _json_text(report)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for line in report.text:
        print(line)
    if args.plot_script:
        if not args.out:
            raise ValueError("--plot-script requires --out (the script references the data file)")
        xcol, ycol = report.meta.get("plot_axes", (report.columns[0], report.columns[-1]))
        with open(args.plot_script, "w", newline="") as fh:
            fh.write(_PLOT_TEMPLATE.format(data=args.out, cols=",".join(report.columns), xcol=xcol, ycol=ycol))
    meta = dict(report.meta)
    meta.update(seed=args.seed, threads=args.threads, version=__version__)
    for key in sorted(meta):
        print(f"# {key}={meta[key]}", file=sys.stderr)


def _parse_floats(text: str, n: int | None = None) -> list[float]:
    vals = [float(v) for v in text.split(",") if v != ""]
    if n is not None and len(vals) != n:
        raise ValueError(f"expected {n} comma-separated values, got {len(vals)}")
    return vals


def _parse_ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v != ""]


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def _seconds(args, started: float) -> str | float:
    return time.perf_counter() - started if args.timing else ""


# ---------------------------------------------------------------- subcommands


def _cmd_pairs_word(args) -> Report:
    word = pairs.parse_word(args.word)
    k, l = (Fraction(v) for v in args.seed_pair.split(","))
    p = pairs.apply_word(word, pairs.make_pair(k, l))
    theta = pairs.zeta_exponent(p)
    report = Report(
        columns=("word", "k", "l", "theta", "monotone"),
        rows=[(word, str(p.k), str(p.l), str(theta), p.monotone)],
        meta={"command": "pairs word"},
    )
    report.text = [
        f"word={word} seed=({k},{l})",
        f"k={p.k} l={p.l} theta={theta}",
        f"k={float(p.k)!r} l={float(p.l)!r} theta={float(theta)!r} (+eps understood)",
    ]
    return report


def _cmd_pairs_search(args) -> Report:
    seeds = None
    if args.seed_pair:
        k, l = (Fraction(v) for v in args.seed_pair.split(","))
        seeds = [pairs.make_pair(k, l)]
    result = pairs.search_words(
        args.max_len,
        seeds=seeds,
        objective=args.objective,
        include_axiom=not args.no_axiom,
    )
    p = result.best
    report = Report(
        columns=("word", "k", "l", "objective", "value"),
        rows=[(p.word, str(p.k), str(p.l), args.objective, str(result.value))],
        meta={"command": "pairs search", "max_len": args.max_len},
    )
    report.text = [f"best word={p.word or '(empty)'} k={p.k} l={p.l} {args.objective}={result.value}"]
    return report


def _cmd_planner_envelope(args) -> Report:
    q = args.denominator_bound
    if q < 1:
        raise ValueError("--denominator-bound must be >= 1")
    seen = set()
    rows = []
    for den in range(1, q + 1):
        for num in range(0, den + 1):
            if math.gcd(num, den) != 1:
                continue
            a = Fraction(num, den)
            if a in seen:
                continue
            seen.add(a)
            rows.append(a)
    rows.sort()
    out = []
    for a in rows:
        p, witness = planner.envelope(a)
        out.append((a.numerator, a.denominator, p.numerator, p.denominator, witness))
    return Report(
        columns=ENVELOPE_COLUMNS,
        rows=out,
        meta={"command": "planner envelope", "denominator_bound": q},
    )


def _cmd_planner_coverage(args) -> Report:
    rep = planner.verify_critical_line_coverage(args.denominator_bound)
    rows = [(tag, str(a), repr(float(a))) for tag, a in sorted(rep.crossovers.items())]
    report = Report(
        columns=("piece", "alpha", "alpha_float"),
        rows=rows,
        meta={
            "command": "planner coverage",
            "points_checked": rep.points_checked,
            "plot_axes": ("alpha", "alpha_float"),
        },
    )
    for tag, a in sorted(rep.crossovers.items()):
        report.text.append(f"crossover {tag}: alpha = {a}")
    report.text.append(f"checked {rep.points_checked} rationals up to denominator {rep.grid_denominator}")
    report.text.append(f"COVERAGE={'PASS' if rep.coverage else 'FAIL'}")
    return report


def _cmd_planner_plan(args) -> Report:
    sc = planner.Scenario(T=args.T, M=args.M, c=args.c)
    plan = planner.make_plan(sc, t_threshold=args.t_threshold)
    report = Report(
        columns=("regime", "alpha", "predicted_exponent", "witness", "N", "R", "valid", "reasons"),
        rows=[
            (
                plan.regime,
                str(plan.alpha),
                str(plan.predicted_exponent),
                plan.witness,
                plan.N,
                plan.R,
                plan.valid,
                ";".join(plan.reasons),
            )
        ],
        meta={"command": "planner plan", "T": args.T, "M": args.M, "c": args.c},
    )
    report.text = [
        f"alpha={plan.alpha} ({float(plan.alpha):.6f}) regime={plan.regime}",
        f"predicted |S| << T^({plan.predicted_exponent}+eps) via {plan.witness}",
        f"N={plan.N} R={plan.R} valid={plan.valid} ({'; '.join(plan.reasons)})",
    ]
    return report


def _cmd_meanvalue(args) -> Report:
    rows = []
    if args.Ns is None and args.N is None:
        raise ValueError("one of --N or --Ns is required")
    ns = _parse_ints(args.Ns) if args.Ns is not None else [args.N]
    for N in ns:
        started = time.perf_counter()
        if args.mode == "count":
            res = meanvalue.count_windowed(N, args.window3, args.window4)
            rows.append(
                (res.method, N, 6, "", "", args.window3 or float(N) ** -0.5,
                 args.window4 or float(N) ** -0.5, res.value, res.stderr, _seconds(args, started))
            )
        elif args.mode == "kernel":
            spec = meanvalue.MeanValueSpec(N, args.r, args.delta, args.Delta)
            res = meanvalue.moment_kernel_sum(spec)
            rows.append(
                (res.method, N, args.r, spec.delta, spec.Delta, "", "", res.value, res.stderr,
                 _seconds(args, started))
            )
        elif args.mode == "quadrature":
            spec = meanvalue.MeanValueSpec(N, args.r, args.delta, args.Delta)
            res = meanvalue.moment_monte_carlo(spec, args.samples, args.seed)
            rows.append(
                (res.method, N, args.r, spec.delta, spec.Delta, "", "", res.value, res.stderr,
                 _seconds(args, started))
            )
        else:
            res = meanvalue.vinogradov_count(N, args.s)
            rows.append((res.method, N, args.s, "", "", "", "", res.value, res.stderr,
                         _seconds(args, started)))
    return Report(
        columns=MEANVALUE_COLUMNS,
        rows=rows,
        meta={"command": f"meanvalue {args.mode}", "plot_axes": ("N", "value")},
    )


def _cmd_decouple(args) -> Report:
    rows = []
    ns = _parse_ints(args.Ns)
    if args.mode == "parabola":
        if ns:
            rep = decouple.ratio_scan(ns, args.ensemble, args.trials, args.seed, args.samples)
            for r in rep.rows:
                rows.append((2, r.N, args.ensemble, r.lhs, r.rhs, r.ratio, r.stderr, args.samples, args.seed))
            meta = {"command": "decouple parabola", "slope": rep.slope, "slope_stderr": rep.slope_stderr}
        else:
            meta = {"command": "decouple parabola", "slope": None}
    else:
        if ns:
            results, slope, slope_err = decouple.bilinear_scan(ns, args.samples, args.seed, args.ensemble)
            for N, r in results:
                rows.append((4, N, args.ensemble, r.lhs, r.benchmark, r.ratio, r.stderr, args.samples, args.seed))
            meta = {"command": "decouple bilinear", "slope": slope, "slope_stderr": slope_err,
                    "status": "exploratory"}
        else:
            meta = {"command": "decouple bilinear", "slope": None}
    meta["plot_axes"] = ("N", "ratio")
    return Report(columns=DECOUPLE_COLUMNS, rows=rows, meta=meta)


def _cmd_zeta_scan(args) -> Report:
    scan = zeta.growth_scan(args.t_min, args.t_max, args.points, args.seed)
    rows = [(t, az, ratio, err) for (t, az, ratio, err) in scan.rows]
    return Report(
        columns=ZETA_COLUMNS,
        rows=rows,
        meta={
            "command": "zeta scan",
            "running_max": scan.running_max,
            "plot_axes": ("t", "ratio_13_84"),
        },
    )


def _cmd_zeta_value(args) -> Report:
    em = zeta.zeta_em_oracle(args.t, args.terms)
    rows = [(args.t, abs(em.value), abs(em.value) / args.t ** zeta.CRITICAL_GROWTH_EXPONENT, em.abs_err)]
    report = Report(columns=ZETA_COLUMNS, rows=rows, meta={"command": "zeta value"})
    bound = zeta.afe_upper_bound(args.t, args.slack)
    report.text = [
        f"zeta(1/2+{args.t}i) = {em.value} (abs_err {em.abs_err:.3g})",
        f"afe bound 2|S|+{args.slack} = {bound:.6f} (slack: unquantified constant)",
    ]
    return report


def _cmd_zeta_afe(args) -> Report:
    rows, violations = zeta.afe_consistency_scan(args.t_min, args.t_max, args.points, args.slack)
    report = Report(
        columns=("t", "afe_bound", "oracle_floor"),
        rows=rows,
        meta={"command": "zeta afe", "violations": len(violations), "plot_axes": ("t", "afe_bound")},
    )
    report.text = [f"violations={len(violations)} (slack C={args.slack})"]
    return report


def _cmd_expsum_quadruple(args) -> Report:
    x = _parse_floats(args.x, 4)
    res = expsum.eval_quadruple_sum(args.N, x)
    return Report(
        columns=("kind", "N", "x1", "x2", "x3", "x4", "re", "im", "abs", "err"),
        rows=[("quadruple", args.N, *x, res.re, res.im, abs(res), res.err)],
        meta={"command": "expsum quadruple"},
    )


def _cmd_expsum_dyadic(args) -> Report:
    T = args.T / (2 * math.pi) if args.radians else args.T
    res = expsum.eval_dyadic_sum(T, args.M, args.kind, args.exponent)
    return Report(
        columns=("kind", "T_cycles", "M", "re", "im", "abs", "err"),
        rows=[(args.kind, T, args.M, res.re, res.im, abs(res), res.err)],
        meta={"command": "expsum dyadic", "convention": "radians" if args.radians else "cycles"},
    )


# ------------------------------------------------------------------- plumbing


def _load_config(path: str) -> dict:
    settings = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, value = line.split("=", 1)
            settings[key.strip()] = value.strip()
    return settings


def _add_global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    """Global options, accepted both before and after the subcommand.

    The subcommand copies use SUPPRESS defaults so they never clobber values
    already parsed at the root level.
    """

    def dflt(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--config", default=dflt(None), help="flat key=value config file (flags win)")
    parser.add_argument("--seed", type=int, default=dflt(None), help="PRNG seed (default 0)")
    parser.add_argument("--threads", type=int, default=dflt(None),
                        help=f"worker hint; never changes results (default ${THREADS_ENV} or 1)")
    parser.add_argument("--out", default=dflt(None), help="output file (default stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default=dflt(None))
    if suppress:
        parser.add_argument("--timing", action="store_true", default=argparse.SUPPRESS)
    else:
        parser.add_argument("--timing", action="store_true", help="populate the seconds column")
    parser.add_argument("--plot-script", default=dflt(None),
                        help="also write a plot script (requires --out)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zetalab",
        description="Desk-scale laboratory for exponential sums, mean values, "
        "exponent pairs, bound planning and critical-line growth.",
    )
    _add_global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pairs", help="exponent-pair calculus")
    ps = p.add_subparsers(dest="mode", required=True)
    w = ps.add_parser("word", help="apply a word over {A,B} to a seed pair")
    w.add_argument("--word", required=True)
    w.add_argument("--seed-pair", default="0,1")
    _add_global_flags(w, suppress=True)
    w.set_defaults(func=_cmd_pairs_word)
    s = ps.add_parser("search", help="exhaustive word search")
    s.add_argument("--max-len", type=int, default=6)
    s.add_argument("--objective", choices=pairs.OBJECTIVES, default="zeta_exponent")
    s.add_argument("--seed-pair", default=None)
    s.add_argument("--no-axiom", action="store_true")
    _add_global_flags(s, suppress=True)
    s.set_defaults(func=_cmd_pairs_search)

    p = sub.add_parser("planner", help="piecewise bounds, coverage, run planning")
    ps = p.add_subparsers(dest="mode", required=True)
    e = ps.add_parser("envelope", help="exact envelope over a rational grid")
    e.add_argument("--denominator-bound", type=int, default=84)
    e.add_argument("--csv", action="store_true", help="(default output is already CSV)")
    _add_global_flags(e, suppress=True)
    e.set_defaults(func=_cmd_planner_envelope)
    c = ps.add_parser("coverage", help="exact critical-line coverage verification")
    c.add_argument("--denominator-bound", type=int, default=1000)
    _add_global_flags(c, suppress=True)
    c.set_defaults(func=_cmd_planner_coverage)
    pl = ps.add_parser("plan", help="plan a concrete (T, M) run")
    pl.add_argument("--T", type=float, required=True)
    pl.add_argument("--M", type=int, required=True)
    pl.add_argument("--c", type=float, default=1.0)
    pl.add_argument("--t-threshold", type=float, default=1.0e6)
    _add_global_flags(pl, suppress=True)
    pl.set_defaults(func=_cmd_planner_plan)

    p = sub.add_parser("meanvalue", help="moment counts and integrals")
    ps = p.add_subparsers(dest="mode", required=True)
    for mode in ("count", "kernel", "quadrature", "vinogradov"):
        m = ps.add_parser(mode)
        m.add_argument("--N", type=int, default=None)
        m.add_argument("--Ns", default=None, help="comma list; overrides --N")
        if mode == "count":
            m.add_argument("--window3", type=float, default=None)
            m.add_argument("--window4", type=float, default=None)
        elif mode == "vinogradov":
            m.add_argument("--s", type=int, default=3)
        else:
            m.add_argument("--r", type=int, default=6)
            m.add_argument("--delta", type=float, default=None)
            m.add_argument("--Delta", type=float, default=None)
            if mode == "quadrature":
                m.add_argument("--samples", type=int, default=100_000)
        _add_global_flags(m, suppress=True)
        m.set_defaults(func=_cmd_meanvalue, mode=mode)

    p = sub.add_parser("decouple", help="decoupling-inequality probes")
    ps = p.add_subparsers(dest="mode", required=True)
    for mode in ("parabola", "bilinear"):
        m = ps.add_parser(mode)
        m.add_argument("--Ns", default="16,32,64,128" if mode == "parabola" else "8,16,32")
        m.add_argument("--ensemble", choices=decouple.ENSEMBLES, default="ones")
        m.add_argument("--samples", type=int, default=1 << 14)
        m.add_argument("--trials", type=int, default=1)
        _add_global_flags(m, suppress=True)
        m.set_defaults(func=_cmd_decouple, mode=mode)

    p = sub.add_parser("zeta", help="critical-line evaluation and scans")
    ps = p.add_subparsers(dest="mode", required=True)
    sc = ps.add_parser("scan", help="growth scan |zeta|/t^(13/84)")
    sc.add_argument("--t-min", type=float, default=10.0)
    sc.add_argument("--t-max", type=float, default=1.0e4)
    sc.add_argument("--points", type=int, default=200)
    _add_global_flags(sc, suppress=True)
    sc.set_defaults(func=_cmd_zeta_scan)
    v = ps.add_parser("value", help="single-point oracle value + AFE bound")
    v.add_argument("--t", type=float, required=True)
    v.add_argument("--terms", type=int, default=None)
    v.add_argument("--slack", type=float, default=zeta.DEFAULT_SLACK)
    _add_global_flags(v, suppress=True)
    v.set_defaults(func=_cmd_zeta_value)
    af = ps.add_parser("afe", help="one-sided AFE consistency scan")
    af.add_argument("--t-min", type=float, default=10.0)
    af.add_argument("--t-max", type=float, default=1.0e4)
    af.add_argument("--points", type=int, default=200)
    af.add_argument("--slack", type=float, default=zeta.DEFAULT_SLACK)
    _add_global_flags(af, suppress=True)
    af.set_defaults(func=_cmd_zeta_afe)

    p = sub.add_parser("expsum", help="direct sum evaluation")
    ps = p.add_subparsers(dest="mode", required=True)
    q = ps.add_parser("quadruple")
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--x", required=True, help="x1,x2,x3,x4")
    _add_global_flags(q, suppress=True)
    q.set_defaults(func=_cmd_expsum_quadruple)
    d = ps.add_parser("dyadic")
    d.add_argument("--T", type=float, required=True)
    d.add_argument("--M", type=int, required=True)
    d.add_argument("--kind", choices=("log", "monomial"), default="log")
    d.add_argument("--exponent", type=_parse_fraction, default=None)
    d.add_argument("--radians", action="store_true",
                   help="interpret --T as radians t (cycles T = t/(2 pi))")
    _add_global_flags(d, suppress=True)
    d.set_defaults(func=_cmd_expsum_dyadic)

    return parser


def _resolve_defaults(args) -> None:
    config = _load_config(args.config) if args.config else {}
    if args.seed is None:
        args.seed = int(config.get("seed", 0))
    if args.threads is None:
        env = os.environ.get(THREADS_ENV)
        args.threads = int(config.get("threads", env if env else 1))
    if args.format is None:
        args.format = config.get("format", "csv")
        if args.format not in ("csv", "json"):
            raise ValueError(f"config format must be csv or json, got {args.format!r}")
    if args.out is None:
        args.out = config.get("out") or None


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.perf_counter()
    try:
        _resolve_defaults(args)
        report = args.func(args)
        emit(report, args)
    except GuardError as exc:
        print(f"error exit={EXIT_GUARD} kind=guard guard={exc.guard} message={exc}", file=sys.stderr)
        return EXIT_GUARD
    except OSError as exc:
        path = getattr(exc, "filename", None) or ""
        print(f"error exit={EXIT_IO} kind=io path={path} message={exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"error exit={EXIT_USAGE} kind=usage message={exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"# seconds={time.perf_counter() - started:.6f}", file=sys.stderr)
    return EXIT_OK


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
