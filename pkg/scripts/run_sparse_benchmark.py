#!/usr/bin/env python3
"""Replication sweep with a sparse coefficient vector (bench preset 2).

The design has many columns but only k of them carry signal, so the
coefficient block needs its own sorted-L1 penalty (penalize_beta) and the
method menu drops the projection-based baselines, which require p well
below n.  The full run uses n=5000, p=1000, k=50 with 100 replications
and can take hours; pass --desk for a laptop-scale run (n=500, p=100,
k=20, 10 replications) that finishes in minutes.

Outputs land in --out-dir: bench_long.csv, bench_aggregate.csv, and
bench_manifest.json, as in the dense sweep.
"""

import argparse
import sys

from robust_slope.cli import main as cli_main

FULL_FRACTIONS = "0.01,0.02,0.05,0.1,0.2,0.3,0.4,0.5"
DESK_FRACTIONS = "0.05,0.1"


def main(argv=None):
    ap = argparse.ArgumentParser(
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    ap.add_argument("--desk", action="store_true",
                    help="laptop-scale run: n=500, p=100, k=20, 10 replications")
    ap.add_argument("--magnitude", default="high",
                    help="shift size: low, high, or a number (default high)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, help="worker processes for replications")
    ap.add_argument("--out-dir", default="results/sparse_benchmark")
    args = ap.parse_args(argv)

    cmd = [
        "bench", "--setting", "2",
        "--magnitude", args.magnitude,
        "--seed", str(args.seed),
        "--out-dir", args.out_dir,
    ]
    if args.desk:
        cmd += ["--n", "500", "--p", "100", "--k", "20",
                "--reps", "10", "--fractions", DESK_FRACTIONS]
    else:
        cmd += ["--n", "5000", "--reps", "100", "--fractions", FULL_FRACTIONS]
    if args.jobs is not None:
        cmd += ["--jobs", str(args.jobs)]
    return cli_main(cmd)


if __name__ == "__main__":
    sys.exit(main())
