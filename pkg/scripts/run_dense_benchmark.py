#!/usr/bin/env python3
"""Replication sweep with a dense coefficient vector (bench preset 1).

Every design column carries the same signal sqrt(2 log p) and the shift
fraction varies across the sweep, so the sweep traces how each method's
false discovery rate and power degrade as contamination grows.  The full
run uses n=5000 with 100 replications over fractions from 1% to 50% and
can take hours; pass --desk for a laptop-scale run (n=1000, 20
replications, three fractions) that takes roughly half an hour on one
core — the cross-validated baseline dominates — and scales down with
--jobs.

Outputs land in --out-dir: bench_long.csv (one row per method, fraction,
replication), bench_aggregate.csv (means and standard deviations), and
bench_manifest.json (the exact configuration).
"""

import argparse
import sys

from robust_slope.cli import main as cli_main

FULL_FRACTIONS = "0.01,0.02,0.05,0.1,0.2,0.3,0.4,0.5"
DESK_FRACTIONS = "0.05,0.1,0.2"


def main(argv=None):
    ap = argparse.ArgumentParser(
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    ap.add_argument("--desk", action="store_true",
                    help="laptop-scale run: n=1000, 20 replications")
    ap.add_argument("--magnitude", default="high",
                    help="shift size: low, high, or a number (default high)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, help="worker processes for replications")
    ap.add_argument("--out-dir", default="results/dense_benchmark")
    args = ap.parse_args(argv)

    n, reps, fractions = ((1000, 20, DESK_FRACTIONS) if args.desk
                          else (5000, 100, FULL_FRACTIONS))
    cmd = [
        "bench", "--setting", "1",
        "--n", str(n),
        "--reps", str(reps),
        "--fractions", fractions,
        "--magnitude", args.magnitude,
        "--seed", str(args.seed),
        "--out-dir", args.out_dir,
    ]
    if args.jobs is not None:
        cmd += ["--jobs", str(args.jobs)]
    return cli_main(cmd)


if __name__ == "__main__":
    sys.exit(main())
