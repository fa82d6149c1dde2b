"""Command-line front end: ``qswarm seq | suite list | run | compare | plot``.

Exit codes: 0 success, 1 runtime failure under ``--strict``, 2 usage or
validation error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__, bench, experiment, seqgen, stats
from .config import ConfigError, load_config

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad input detected after argument parsing; reported with exit code 2."""


def _fmt(v: float, digits: int) -> str:
    return f"{v:.{digits}g}"


# ---------------------------------------------------------------- seq

def cmd_seq(args) -> int:
    params = {}
    if args.p is not None:
        params["p"] = args.p
    if args.perm_file:
        params["perm_file"] = args.perm_file
    if args.q is not None:
        params["q"] = args.q
    if args.J is not None:
        params["J"] = args.J
    if args.kind.lower() == "oa":
        params["n"] = args.n
    if args.path:
        params["path"] = args.path
    if args.no_wrap:
        params["wrap"] = False
    try:
        stream = seqgen.make_stream(args.kind, args.dimension, seed=args.seed, **params)
        if args.skip:
            stream.next_points(args.skip)
        pts = stream.next_points(args.n)
    except (ValueError, OSError, IndexError) as exc:
        raise UsageError(str(exc)) from exc
    lines = [" ".join(_fmt(float(v), args.digits) for v in row) for row in pts]
    if args.discrepancy:
        lines.append(f"# CL2 {seqgen.centered_l2_discrepancy(pts)!r}")
    if args.output:
        ps = seqgen.PointSet(pts, provenance=json.dumps(stream.describe()))
        seqgen.save_point_set(ps, args.output, header=ps.provenance)
        if args.discrepancy:
            with open(args.output, "a") as fh:
                fh.write(lines[-1] + "\n")
    else:
        print("\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------- suite

def cmd_suite_list(args) -> int:
    try:
        specs = bench.standard_suite(args.dimension, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.json:
        print(json.dumps(bench.suite_manifest(specs), indent=2))
        return EXIT_OK
    print(f"{'id':<5}{'kind':<13}{'Z*':>7}  name")
    for s in specs:
        print(f"{s.fid:<5}{s.kind:<13}{s.bias:>7g}  {s.name}")
    return EXIT_OK


# ---------------------------------------------------------------- run

def _cell_line(ts: experiment.TrialSet, eps_tols) -> str:
    if not ts.ok:
        return f"{ts.function:<5}{ts.algorithm:<24}ABORTED  {ts.error.splitlines()[0]}"
    parts = []
    for eps in eps_tols:
        s = experiment.summarize(ts, eps, with_time=False)
        cs = "-" if s.CS == stats.FAIL else str(s.CS)
        parts.append(f"eps={eps:g}: CS={cs:>5} NoS={s.NoS:>3}")
    return f"{ts.function:<5}{ts.algorithm:<24}" + "  ".join(parts)


def cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
    except (ConfigError, OSError) as exc:
        raise UsageError(str(exc)) from exc
    if args.output_dir:
        from dataclasses import replace
        cfg = replace(cfg, output_dir=args.output_dir)
    try:
        workers = args.workers or experiment.worker_count()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not args.quiet:
        print(f"running {len(cfg.functions)} functions x {len(cfg.algorithms)} algorithms "
              f"x {cfg.R} runs, G={cfg.G}, workers={workers}")
    progress = None if args.quiet else (lambda ts: print(_cell_line(ts, cfg.eps_tol), flush=True))
    trials, _ = experiment.run_experiment(cfg, workers=workers, progress=progress)
    failed = [t for t in trials if not t.ok]
    if not args.quiet:
        print(f"results written to {cfg.result_dir}")
    if failed:
        print(f"warning: {len(failed)} cell(s) aborted; see error.txt in their directories",
              file=sys.stderr)
        if args.strict:
            return EXIT_RUNTIME
    return EXIT_OK


# ---------------------------------------------------------------- compare

def render_table(report: stats.Report, values, ranks) -> str:
    width = max(12, *(len(a) + 2 for a in report.algorithms))
    out = ["Fns.".ljust(6) + "".join(a.rjust(width) for a in report.algorithms)]
    for f, row, rrow in zip(report.functions, values, ranks):
        cells = []
        for v, r in zip(row, rrow):
            if stats.is_fail(v):
                txt = "-"
            elif isinstance(v, float) and not float(v).is_integer():
                txt = f"{v:.3f}"
            else:
                txt = str(int(v))
            cells.append(f"{txt}({r:g})".rjust(width))
        out.append(f"{f:<6}" + "".join(cells))
    out.append("AvgRk".ljust(6) + "".join(f"{r:.3f}".rjust(width) for r in report.avg_ranks))
    tau = "inf" if report.tau_F_infinite else f"{report.tau_F:.4f}"
    out.append(f"chi2_F = {report.chi2:.4f}  tau_F = {tau}  tau_c = {report.tau_c:.4f}  "
               f"reject H0: {'yes' if report.reject_null else 'no'}  CD = {report.CD:.4f}")
    sig = [(report.algorithms[i], report.algorithms[j])
           for i in range(len(report.algorithms)) for j in range(i + 1, len(report.algorithms))
           if report.pairwise[i][j]]
    out.append("significant pairs: " + (", ".join(f"{a} vs {b}" for a, b in sig) if sig else "none"))
    return "\n".join(out)


def cmd_compare(args) -> int:
    try:
        rows = experiment.load_summary(args.results)
        values, fns, algs, eps = experiment.metric_table(rows, args.metric, args.eps)
        if len(fns) < 2 or len(algs) < 2:
            raise ValueError(f"need >= 2 functions and >= 2 algorithms, got {len(fns)} x {len(algs)}")
        metric = {"CS": "CS", "NOS": "NoS", "TIME": "time"}[args.metric.upper()]
        if metric == "time" and all(stats.is_fail(v) for row in values for v in row):
            raise ValueError("no wall times recorded (set record_wall_time: true)")
        report = stats.compare(values, algs, fns, metric, eps, args.alpha)
        ranks = stats.rank_rows(values, "max" if metric == "NoS" else "min").ranks
    except (FileNotFoundError, ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from exc
    out = Path(args.output) if args.output else Path(args.results) / "report.json"
    out.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    print(render_table(report, values, ranks))
    return EXIT_OK


# ---------------------------------------------------------------- plot

def _manifest_labels(results: Path) -> list:
    manifest = results / "manifest.json"
    if not manifest.is_file():
        return []
    return [a["label"] for a in json.loads(manifest.read_text()).get("config", {}).get("algorithms", [])]


def _z_star(results: Path, function: str) -> float:
    manifest = results / "manifest.json"
    if manifest.is_file():
        for entry in json.loads(manifest.read_text()).get("suite", []):
            if entry.get("fid") == function:
                return float(entry["bias"])
    return float(bench.SUITE_BIAS[function])


def svg_plot(series: dict, title: str, log_y: bool = True, width: int = 640, height: int = 400) -> str:
    """Minimal line chart: one polyline per series, legend with the series labels."""
    palette = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2",
               "#7f7f7f", "#bcbd22", "#17becf"]
    left, right, top, bottom = 70, 20, 30, 50
    allv = np.concatenate([np.asarray(v, dtype=float) for v in series.values()])
    if log_y:
        pos = allv[allv > 0]
        floor = pos.min() if pos.size else 1e-16
        tr = lambda a: np.log10(np.maximum(np.asarray(a, dtype=float), floor))
    else:
        tr = lambda a: np.asarray(a, dtype=float)
    ys = tr(allv)
    y0, y1 = float(ys.min()), float(ys.max())
    if y1 - y0 < 1e-12:
        y0, y1 = y0 - 0.5, y1 + 0.5
    n = max(len(v) for v in series.values())
    sx = lambda i: left + (width - left - right) * i / max(n - 1, 1)
    sy = lambda y: top + (height - top - bottom) * (1 - (y - y0) / (y1 - y0))
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
             f'viewBox="0 0 {width} {height}">',
             '<rect width="100%" height="100%" fill="white"/>',
             f'<text x="{width / 2}" y="18" text-anchor="middle" font-size="14">{title}</text>',
             f'<line x1="{left}" y1="{height - bottom}" x2="{width - right}" y2="{height - bottom}" stroke="black"/>',
             f'<line x1="{left}" y1="{top}" x2="{left}" y2="{height - bottom}" stroke="black"/>',
             f'<text x="{(left + width - right) / 2}" y="{height - 12}" text-anchor="middle" '
             'font-size="12">iteration</text>',
             f'<text x="16" y="{(top + height - bottom) / 2}" font-size="12" text-anchor="middle" '
             f'transform="rotate(-90 16 {(top + height - bottom) / 2})">'
             f'{"log10 " if log_y else ""}relative error</text>']
    for t in np.linspace(y0, y1, 5):
        parts.append(f'<text x="{left - 6}" y="{sy(t) + 4:.1f}" text-anchor="end" font-size="10">{t:.3g}</text>')
    for t in np.linspace(0, n - 1, 5):
        parts.append(f'<text x="{sx(t):.1f}" y="{height - bottom + 14}" text-anchor="middle" '
                     f'font-size="10">{int(round(t))}</text>')
    for j, (label, vals) in enumerate(series.items()):
        color = palette[j % len(palette)]
        yv = tr(vals)
        pts = " ".join(f"{sx(i):.2f},{sy(y):.2f}" for i, y in enumerate(yv))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = top + 14 + 16 * j
        parts.append(f'<line x1="{width - right - 150}" y1="{ly - 4}" x2="{width - right - 130}" '
                     f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{width - right - 125}" y="{ly}" font-size="11">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_plot(args) -> int:
    results = Path(args.results)
    if not results.is_dir() or not any(results.iterdir()):
        raise UsageError(f"{results}: no results found")
    if args.function not in bench.SUITE_NAMES:
        raise UsageError(f"unknown function id {args.function!r}")
    try:
        trials = experiment.load_trials(results, args.function)
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from exc
    if not trials:
        raise UsageError(f"no curves stored for {args.function}")
    order = [l for l in _manifest_labels(results) if l in trials]
    trials = {l: trials[l] for l in order + sorted(set(trials) - set(order))}
    z = _z_star(results, args.function)
    series = {label: experiment.relative_error(experiment.average_curve(c), z)
              for label, c in trials.items()}
    outdir = Path(args.output_dir) if args.output_dir else results / "plots"
    outdir.mkdir(parents=True, exist_ok=True)
    labels = list(series)
    n = max(len(v) for v in series.values())
    rows = ["iter," + ",".join(labels)]
    for i in range(n):
        rows.append(f"{i}," + ",".join(repr(float(series[l][i])) if i < len(series[l]) else ""
                                       for l in labels))
    csv_path = outdir / f"{args.function}.csv"
    csv_path.write_text("\n".join(rows) + "\n")
    written = [csv_path]
    if not args.csv_only:
        svg_path = outdir / f"{args.function}.svg"
        svg_path.write_text(svg_plot(series, f"{args.function}: average convergence",
                                     log_y=not args.linear))
        written.append(svg_path)
    for p in written:
        print(p)
    return EXIT_OK


# ---------------------------------------------------------------- entry

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qswarm", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"qswarm {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="log debug messages")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("seq", help="emit points from a random or low-discrepancy stream")
    s.add_argument("kind", help="random | halton | huawang | oa | file")
    s.add_argument("-d", "--dimension", type=int, default=1)
    s.add_argument("-n", type=int, default=10, help="number of points")
    s.add_argument("-p", type=int, help="Hua-Wang prime")
    s.add_argument("--perm-file", help="Halton digit permutation table")
    s.add_argument("--q", type=int, help="orthogonal array levels")
    s.add_argument("--J", type=int, help="orthogonal array basic columns")
    s.add_argument("--path", help="point-set file for kind=file")
    s.add_argument("--no-wrap", action="store_true", help="error instead of wrapping a file")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--skip", type=int, default=0, help="discard this many leading points")
    s.add_argument("--digits", type=int, default=6, help="significant digits on stdout")
    s.add_argument("--discrepancy", action="store_true", help="append the centered L2 discrepancy")
    s.add_argument("-o", "--output", help="write a point-set file instead of stdout")
    s.set_defaults(func=cmd_seq)

    su = sub.add_parser("suite", help="benchmark suite commands")
    su_sub = su.add_subparsers(dest="suite_command", required=True)
    sl = su_sub.add_parser("list", help="list the benchmark functions")
    sl.add_argument("-d", "--dimension", type=int, default=10)
    sl.add_argument("--seed", type=int, default=2022)
    sl.add_argument("--json", action="store_true", help="full manifest as JSON")
    sl.set_defaults(func=cmd_suite_list)

    r = sub.add_parser("run", help="run an experiment described by a config file")
    r.add_argument("config")
    r.add_argument("--strict", action="store_true", help="exit 1 if any cell aborted")
    r.add_argument("--workers", type=int, help="process count (default: QSWARM_THREADS or all cores)")
    r.add_argument("--output-dir", help="override output_dir from the config")
    r.add_argument("-q", "--quiet", action="store_true")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("compare", help="Friedman/Nemenyi comparison of a results directory")
    c.add_argument("results")
    c.add_argument("--metric", default="CS", choices=["CS", "NoS", "time", "cs", "nos", "TIME"])
    c.add_argument("--eps", type=float, help="tolerance to compare (required if several)")
    c.add_argument("--alpha", type=float, default=0.05)
    c.add_argument("-o", "--output", help="report path (default <results>/report.json)")
    c.set_defaults(func=cmd_compare)

    p = sub.add_parser("plot", help="average convergence curves as SVG plus CSV")
    p.add_argument("results")
    p.add_argument("function")
    p.add_argument("--linear", action="store_true", help="linear y axis")
    p.add_argument("--csv-only", action="store_true")
    p.add_argument("--output-dir", help="default <results>/plots")
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qswarm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
