#!/usr/bin/env python3
"""Run one experiment config, then write CS and NoS reports per tolerance
and a convergence plot per function.

    python3 scripts/run_study.py configs/desk.yaml --workers 4
    python3 scripts/run_study.py configs/variants.yaml --R 5 --G 500   # quick look
"""
import argparse
import sys
from dataclasses import replace

from qswarm import cli, experiment
from qswarm.config import load_config


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    ap.add_argument("--workers", type=int)
    ap.add_argument("--output-dir")
    ap.add_argument("--R", type=int, help="override the run count")
    ap.add_argument("--G", type=int, help="override the iteration budget")
    args = ap.parse_args(argv)

    cfg = load_config(args.config)
    over = {k: v for k, v in (("output_dir", args.output_dir), ("R", args.R), ("G", args.G)) if v}
    cfg = replace(cfg, **over)
    workers = args.workers or experiment.worker_count()
    print(f"{cfg.name}: {len(cfg.functions)} functions x {len(cfg.algorithms)} algorithms "
          f"x R={cfg.R}, G={cfg.G}, {workers} workers")
    experiment.run_experiment(cfg, workers=workers,
                              progress=lambda ts: print(cli._cell_line(ts, cfg.eps_tol), flush=True))

    root = str(cfg.result_dir)
    for eps in cfg.eps_tol:
        for metric in ("CS", "NoS"):
            print(f"\n== {metric} at eps_tol={eps:g}")
            cli.main(["compare", root, "--metric", metric, "--eps", str(eps),
                      "-o", f"{root}/report_{metric}_{eps:g}.json"])
    for fid in cfg.functions:
        cli.main(["plot", root, fid])
    return 0


if __name__ == "__main__":
    sys.exit(main())
