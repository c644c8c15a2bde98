"""Replication harness: run methods over outlier fractions and summarize."""

import dataclasses
import math
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .baselines import fit_e_lasso, fit_ipod, fit_lasso_cv, fit_slope_concat
from .metrics import ReplicationRecord, aggregate, fdp, mse, power_prop
from .simulate import SimulationConfig, make_dataset
from .solver import NumericalError, debias, e_slope
from .variance import robust_sigma

__all__ = ["METHODS", "fit_method", "run_replication", "run_benchmark",
           "LONG_COLUMNS", "AGGREGATE_COLUMNS"]

METHODS = ("eslope", "elasso", "ipod", "lassocv", "slope-concat")

LONG_COLUMNS = (
    "method", "fraction", "replication", "seed", "fdp", "power",
    "mse_beta_raw", "mse_beta_debiased", "mse_mu_raw", "mse_mu_debiased",
    "converged", "runtime_s",
)

AGGREGATE_COLUMNS = (
    "method", "fraction", "n_replications", "fdr", "power",
    "mse_beta_raw", "mse_beta_debiased", "mse_mu_raw", "mse_mu_debiased",
    "std_fdp", "std_power",
)


def fit_method(method, data, sigma, q=0.05, eps=0.0, penalize_beta=False,
               cv_folds=5, cv_seed=0, grid=None, **solver_opts):
    """Dispatch a method name to its fitting routine."""
    if method == "eslope":
        return e_slope(data, sigma, q=q, eps=eps, penalize_beta=penalize_beta,
                       **solver_opts)
    if method == "elasso":
        return fit_e_lasso(data, sigma, **solver_opts)
    if method == "ipod":
        return fit_ipod(data, sigma, grid=grid)
    if method == "lassocv":
        return fit_lasso_cv(data, sigma, folds=cv_folds, grid=grid, seed=cv_seed)
    if method == "slope-concat":
        return fit_slope_concat(data, sigma, q=q, **solver_opts)
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


def run_replication(cfg, methods, q=0.05, eps=0.0, penalize_beta=False,
                    cv_folds=5):
    """One simulated dataset, every method fitted on it.

    The noise scale is always estimated (robustly) from the data and shared
    by all methods.  Returns one row dict per method; power is NaN when the
    dataset has no true outliers, debiased errors are NaN when the refit is
    impossible.
    """
    data = make_dataset(cfg)
    sigma = robust_sigma(data)
    rows = []
    for method in methods:
        start = time.perf_counter()
        result = fit_method(method, data, sigma, q=q, eps=eps,
                            penalize_beta=penalize_beta, cv_folds=cv_folds,
                            cv_seed=cfg.seed)
        runtime = time.perf_counter() - start
        est = result.outlier_support
        true = data.outlier_support
        try:
            beta_deb, mu_deb = debias(data, est)
            mse_beta_deb = mse(beta_deb, data.beta_star)
            mse_mu_deb = mse(mu_deb, data.mu_star)
        except (ValueError, NumericalError):
            mse_beta_deb = math.nan
            mse_mu_deb = math.nan
        rows.append({
            "method": method,
            "fraction": cfg.outlier_fraction,
            "replication": cfg.seed,
            "seed": cfg.seed,
            "fdp": fdp(est, true),
            "power": power_prop(est, true) if true else math.nan,
            "mse_beta_raw": mse(result.beta_hat, data.beta_star),
            "mse_beta_debiased": mse_beta_deb,
            "mse_mu_raw": mse(result.mu_hat, data.mu_star),
            "mse_mu_debiased": mse_mu_deb,
            "converged": result.converged,
            "runtime_s": runtime,
        })
    return rows


def _task(args):
    base_cfg, rep, methods, q, eps, penalize_beta, cv_folds = args
    cfg = dataclasses.replace(base_cfg, seed=base_cfg.seed + rep)
    rows = run_replication(cfg, methods, q=q, eps=eps,
                           penalize_beta=penalize_beta, cv_folds=cv_folds)
    for row in rows:
        row["replication"] = rep
    return rows


def run_benchmark(base_cfg, fractions, reps, methods, q=0.05, eps=0.0,
                  penalize_beta=False, cv_folds=5, jobs=1):
    """Sweep outlier fractions x replications; returns (long_rows, agg_rows).

    Replication r of every fraction uses seed base_cfg.seed + r.  Output rows
    are ordered by (fraction, replication, method order) regardless of the
    number of worker processes.
    """
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; choose from {METHODS}")
    tasks = []
    for fraction in fractions:
        cfg = dataclasses.replace(base_cfg, outlier_fraction=fraction)
        for rep in range(reps):
            tasks.append((cfg, rep, tuple(methods), q, eps, penalize_beta,
                          cv_folds))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_task = list(pool.map(_task, tasks))
    else:
        per_task = [_task(t) for t in tasks]
    long_rows = [row for rows in per_task for row in rows]
    order = {m: i for i, m in enumerate(methods)}
    long_rows.sort(key=lambda r: (r["fraction"], r["replication"],
                                  order[r["method"]]))

    agg_rows = []
    for fraction in fractions:
        for method in methods:
            got = [r for r in long_rows
                   if r["fraction"] == fraction and r["method"] == method]
            raw = aggregate([
                ReplicationRecord(r["fdp"], r["power"], r["mse_beta_raw"],
                                  r["mse_mu_raw"], 0, 0)
                for r in got
            ])
            deb = aggregate([
                ReplicationRecord(r["fdp"], r["power"], r["mse_beta_debiased"],
                                  r["mse_mu_debiased"], 0, 0)
                for r in got
            ])
            agg_rows.append({
                "method": method,
                "fraction": fraction,
                "n_replications": raw.n_replications,
                "fdr": raw.fdr,
                "power": raw.mean_power,
                "mse_beta_raw": raw.mean_mse_beta,
                "mse_beta_debiased": deb.mean_mse_beta,
                "mse_mu_raw": raw.mean_mse_mu,
                "mse_mu_debiased": deb.mean_mse_mu,
                "std_fdp": raw.std_fdp,
                "std_power": raw.std_power,
            })
    return long_rows, agg_rows
