"""Command-line interface.

Subcommands: ``simulate`` (draw a synthetic dataset to CSV), ``fit`` (run one
method on X/y files, emit JSON), ``bench`` (replication sweep to CSV tables),
``path`` (shift estimates along a grid of penalty levels).

Exit codes: 0 success (including non-converged fits, which are reported),
2 usage or input errors, 3 numerical failures.
"""

import argparse
import dataclasses
import json
import math
import os
import sys
import time

import numpy as np

from . import bench as bench_mod
from .baselines import default_level_grid
from .dataio import SCHEMA_VERSION, load_xy, save_dataset
from .simulate import SimulationConfig, make_dataset
from .solver import (
    NumericalError,
    PenaltySpec,
    SlopePenalty,
    debias,
    fit_joint,
)
from .sorted_l1 import WeightSequence
from .variance import robust_sigma
from .weights import bh_weights

JOBS_ENV = "ROBUST_SLOPE_JOBS"


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_table(path, columns, rows):
    with open(path, "w") as fh:
        fh.write(",".join(columns))
        fh.write("\n")
        for row in rows:
            fh.write(",".join(_fmt(row[c]) for c in columns))
            fh.write("\n")


def _float_list(text):
    vals = [float(tok) for tok in text.split(",") if tok.strip()]
    if not vals:
        raise argparse.ArgumentTypeError("expected a comma-separated list of numbers")
    return vals


def _k_arg(text):
    return text if text == "dense" else int(text)


def _magnitude_arg(text):
    return text if text in ("low", "high") else float(text)


def _resolve_sigma(spec, data):
    if spec == "auto":
        return robust_sigma(data), "auto"
    sigma = float(spec)
    if sigma <= 0:
        raise ValueError("--sigma must be positive")
    return sigma, "given"


def cmd_simulate(args):
    config = {}
    if args.config:
        with open(args.config) as fh:
            config = json.load(fh)
        if not isinstance(config, dict):
            raise ValueError("--config must hold a flat JSON object")

    def pick(name, default):
        v = getattr(args, name)
        return config.get(name, default) if v is None else v

    n = pick("n", None)
    p = pick("p", None)
    if n is None or p is None:
        raise ValueError("n and p are required (flag or config file)")
    cfg = SimulationConfig(
        n=int(n),
        p=int(p),
        corr=float(pick("corr", 0.0)),
        k=_k_arg(str(pick("k", "dense"))),
        outlier_fraction=float(pick("outlier_fraction", 0.05)),
        magnitude=_magnitude_arg(str(pick("magnitude", "high"))),
        sigma=float(pick("sigma", 1.0)),
        random_sign=bool(pick("random_sign", False)),
        seed=int(pick("seed", 0)),
    )
    data = make_dataset(cfg)
    save_dataset(args.out, data, cfg)
    print(f"wrote dataset (n={data.n}, p={data.p}, "
          f"outliers={len(data.outlier_support)}) to {args.out}")
    return 0


def cmd_fit(args):
    data = load_xy(args.x, args.y)
    sigma, sigma_source = _resolve_sigma(args.sigma, data)
    solver_opts = {}
    if args.max_iter is not None:
        solver_opts["max_iter"] = args.max_iter
    if args.tol is not None:
        solver_opts["tol"] = args.tol
    start = time.perf_counter()
    result = bench_mod.fit_method(
        args.method,
        data,
        sigma,
        q=args.q,
        eps=args.eps,
        penalize_beta=args.penalize_beta,
        cv_folds=args.folds,
        cv_seed=args.cv_seed,
        grid=np.asarray(args.grid) if args.grid else None,
        **solver_opts,
    )
    runtime = time.perf_counter() - start
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "fit",
        "method": args.method,
        "n": data.n,
        "p": data.p,
        "sigma": sigma,
        "sigma_source": sigma_source,
        "q": args.q,
        "eps": args.eps,
        "beta_hat": [float(v) for v in result.beta_hat],
        "mu_hat": [float(v) for v in result.mu_hat],
        "support": [i + 1 for i in sorted(result.outlier_support)],
        "objective": result.objective,
        "iterations": result.iterations,
        "converged": result.converged,
        "kkt_beta_ok": result.kkt_beta_ok,
        "kkt_mu_ok": result.kkt_mu_ok,
        "runtime_s": runtime,
    }
    if args.debias:
        beta_deb, mu_deb = debias(data, result.outlier_support)
        doc["beta_debiased"] = [float(v) for v in beta_deb]
        doc["mu_debiased"] = [float(v) for v in mu_deb]
    text = json.dumps(doc, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
            fh.write("\n")
    else:
        print(text)
    if not result.converged:
        print("warning: fit did not converge within the iteration budget",
              file=sys.stderr)
    return 0


_SETTINGS = {
    "1": {"p": 20, "k": "dense", "corr": 0.4,
          "methods": ["eslope", "elasso", "ipod", "lassocv"],
          "penalize_beta": False},
    "2": {"p": 1000, "k": 50, "corr": 0.4,
          "methods": ["eslope", "elasso", "slope-concat"],
          "penalize_beta": True},
}


def cmd_bench(args):
    preset = _SETTINGS.get(args.setting, {})
    p = args.p if args.p is not None else preset.get("p")
    if args.n is None or p is None:
        raise ValueError("bench needs --n and --p (or a setting preset for p)")
    corr = args.corr if args.corr is not None else preset.get("corr", 0.0)
    k = args.k if args.k is not None else preset.get("k", "dense")
    methods = args.methods if args.methods else preset.get(
        "methods", list(bench_mod.METHODS))
    penalize_beta = (args.penalize_beta if args.penalize_beta is not None
                     else preset.get("penalize_beta", False))
    base_cfg = SimulationConfig(
        n=args.n,
        p=p,
        corr=corr,
        k=k,
        outlier_fraction=args.fractions[0],
        magnitude=args.magnitude,
        sigma=args.sigma,
        random_sign=args.random_sign,
        seed=args.seed,
    )
    long_rows, agg_rows = bench_mod.run_benchmark(
        base_cfg,
        fractions=args.fractions,
        reps=args.reps,
        methods=methods,
        q=args.q,
        eps=args.eps,
        penalize_beta=penalize_beta,
        cv_folds=args.folds,
        jobs=args.jobs,
    )
    os.makedirs(args.out_dir, exist_ok=True)
    long_path = os.path.join(args.out_dir, "bench_long.csv")
    agg_path = os.path.join(args.out_dir, "bench_aggregate.csv")
    _write_table(long_path, bench_mod.LONG_COLUMNS, long_rows)
    _write_table(agg_path, bench_mod.AGGREGATE_COLUMNS, agg_rows)
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "kind": "bench",
        "setting": args.setting,
        "config": dataclasses.asdict(base_cfg),
        "fractions": list(args.fractions),
        "reps": args.reps,
        "methods": list(methods),
        "q": args.q,
        "eps": args.eps,
        "penalize_beta": penalize_beta,
    }
    with open(os.path.join(args.out_dir, "bench_manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    for row in agg_rows:
        print(f"{row['method']:>12} fraction={row['fraction']:<6g} "
              f"fdr={row['fdr']:.3f} power={row['power']:.3f}")
    print(f"wrote {long_path} and {agg_path}")
    return 0


def cmd_path(args):
    data = load_xy(args.x, args.y)
    sigma, _ = _resolve_sigma(args.sigma, data)
    if args.grid:
        grid = np.asarray(args.grid, dtype=float)
    else:
        lo = args.grid_min
        hi = args.grid_max
        if lo is None or hi is None:
            grid = default_level_grid(sigma, data.n, num=args.grid_num)
        else:
            grid = np.geomspace(lo, hi, args.grid_num)
    if np.any(grid <= 0):
        raise ValueError("grid levels must be positive")
    grid = np.sort(grid)

    if args.method == "slope":
        base = bh_weights(data.n, args.q, sigma)
        selected = 1.0

        def mu_at(level):
            pen = PenaltySpec(None, SlopePenalty(base, scale=level))
            return fit_joint(data, pen)

    else:  # lasso
        selected = 2.0 * sigma * math.sqrt(math.log(data.n))

        def mu_at(level):
            pen = PenaltySpec(
                None, SlopePenalty(WeightSequence(np.full(data.n, level)), 1.0))
            return fit_joint(data, pen)

    with open(args.out, "w") as fh:
        fh.write("level,index,mu\n")
        for level in grid:
            result = mu_at(float(level))
            for i, v in enumerate(result.mu_hat, start=1):
                fh.write(f"{float(level)!r},{i},{float(v)!r}\n")
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "kind": "path",
        "method": args.method,
        "sigma": sigma,
        "q": args.q,
        "selected_level": selected,
        "grid": [float(v) for v in grid],
    }
    sidecar = os.path.splitext(args.out)[0] + ".json"
    with open(sidecar, "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    print(f"selected_level={selected!r}")
    print(f"wrote {args.out} and {sidecar}")
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="robust-slope",
        description="Joint robust regression and outlier detection with "
                    "sorted-L1 penalties.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="draw a synthetic dataset to CSV")
    sim.add_argument("--n", type=int)
    sim.add_argument("--p", type=int)
    sim.add_argument("--corr", type=float)
    sim.add_argument("--k", type=_k_arg)
    sim.add_argument("--outlier-fraction", dest="outlier_fraction", type=float)
    sim.add_argument("--magnitude", type=_magnitude_arg)
    sim.add_argument("--sigma", type=float)
    sim.add_argument("--random-sign", dest="random_sign",
                     action=argparse.BooleanOptionalAction, default=None)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--config", help="flat JSON object with default values")
    sim.add_argument("--out", required=True, help="output directory")
    sim.set_defaults(func=cmd_simulate)

    fit = sub.add_parser("fit", help="fit one method on X/y CSV files")
    fit.add_argument("--method", required=True, choices=bench_mod.METHODS)
    fit.add_argument("--x", required=True, help="design CSV (no header)")
    fit.add_argument("--y", required=True, help="response CSV (one value per line)")
    fit.add_argument("--sigma", default="auto",
                     help="noise scale, or 'auto' to estimate robustly")
    fit.add_argument("--q", type=float, default=0.05)
    fit.add_argument("--eps", type=float, default=0.0)
    fit.add_argument("--penalize-beta", dest="penalize_beta",
                     action="store_true")
    fit.add_argument("--debias", action="store_true",
                     help="add least-squares estimates refit on the clean rows")
    fit.add_argument("--folds", type=int, default=5)
    fit.add_argument("--cv-seed", dest="cv_seed", type=int, default=0)
    fit.add_argument("--grid", type=_float_list,
                     help="penalty levels for ipod/lassocv")
    fit.add_argument("--max-iter", dest="max_iter", type=int)
    fit.add_argument("--tol", type=float)
    fit.add_argument("--out", help="write the JSON result here instead of stdout")
    fit.set_defaults(func=cmd_fit)

    ben = sub.add_parser("bench", help="replication sweep over outlier fractions")
    ben.add_argument("--setting", choices=["1", "2", "custom"], default="custom")
    ben.add_argument("--n", type=int)
    ben.add_argument("--p", type=int)
    ben.add_argument("--corr", type=float)
    ben.add_argument("--k", type=_k_arg)
    ben.add_argument("--magnitude", type=_magnitude_arg, default="high")
    ben.add_argument("--fractions", type=_float_list, default=[0.05, 0.1])
    ben.add_argument("--reps", type=int, default=20)
    ben.add_argument("--sigma", type=float, default=1.0)
    ben.add_argument("--q", type=float, default=0.05)
    ben.add_argument("--eps", type=float, default=0.0)
    ben.add_argument("--methods", type=lambda s: s.split(","))
    ben.add_argument("--penalize-beta", dest="penalize_beta",
                     action=argparse.BooleanOptionalAction, default=None)
    ben.add_argument("--folds", type=int, default=5)
    ben.add_argument("--random-sign", dest="random_sign", action="store_true")
    ben.add_argument("--seed", type=int, default=0)
    ben.add_argument("--jobs", type=int,
                     default=int(os.environ.get(JOBS_ENV, "1")))
    ben.add_argument("--out-dir", dest="out_dir", required=True)
    ben.set_defaults(func=cmd_bench)

    pat = sub.add_parser("path", help="shift estimates along a penalty-level grid")
    pat.add_argument("--x", required=True)
    pat.add_argument("--y", required=True)
    pat.add_argument("--method", required=True, choices=["slope", "lasso"])
    pat.add_argument("--sigma", default="auto")
    pat.add_argument("--q", type=float, default=0.05)
    pat.add_argument("--grid", type=_float_list)
    pat.add_argument("--grid-min", dest="grid_min", type=float)
    pat.add_argument("--grid-max", dest="grid_max", type=float)
    pat.add_argument("--grid-num", dest="grid_num", type=int, default=50)
    pat.add_argument("--out", required=True, help="output CSV path")
    pat.set_defaults(func=cmd_path)

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
