#!/usr/bin/env python3
"""Summarise a finished desk run: per-function CS wins over Rand plus the
CS and NoS Friedman verdicts.

    python3 scripts/desk_verdict.py results/desk
"""
import math
import sys

from qswarm import experiment, stats


def main(root: str) -> int:
    rows = experiment.load_summary(root)
    cs, fns, algs, eps = experiment.metric_table(rows, "CS")
    key = lambda v: math.inf if v == stats.FAIL else v
    base = algs.index("Rand") if "Rand" in algs else 0
    for j, a in enumerate(algs):
        if j != base:
            wins = sum(key(r[j]) < key(r[base]) for r in cs)
            print(f"{a}: strictly fewer iterations than {algs[base]} on {wins}/{len(fns)} functions")
    for metric, vals in (("CS", cs), ("NoS", experiment.metric_table(rows, "NoS", eps)[0])):
        rep = stats.compare(vals, algs, fns, metric, eps)
        tau = "inf" if rep.tau_F_infinite else f"{rep.tau_F:.3f}"
        ranks = ", ".join(f"{a}={r:.3f}" for a, r in zip(algs, rep.avg_ranks))
        print(f"{metric}: tau_F={tau} tau_c={rep.tau_c:.3f} "
              f"{'reject' if rep.reject_null else 'keep'} null; ranks {ranks}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1] if len(sys.argv) > 1 else "results/desk"))
