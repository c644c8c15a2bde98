"""Joint robust regression and outlier detection with sorted-L1 penalties."""

from .sorted_l1 import WeightSequence, dual_feasible, prox_sorted_l1, sorted_l1_norm
from .weights import bh_weights, inflate, normal_quantile, slope_log_weights
from .solver import (
    SUPPORT_THRESHOLD,
    Dataset,
    FitResult,
    L1Penalty,
    NumericalError,
    PenaltySpec,
    SlopePenalty,
    debias,
    e_slope,
    fit_joint,
    kkt_check,
    lipschitz_bound,
    objective_value,
    support_set,
)
from .baselines import (
    concat_objective,
    default_level_grid,
    fit_e_lasso,
    fit_ipod,
    fit_lasso_cv,
    fit_slope_concat,
    qr_complement,
)
from .variance import huber_fit, mad_scale, robust_sigma
from .simulate import SimulationConfig, make_dataset, toeplitz_gaussian_design
from .metrics import MetricsSummary, ReplicationRecord, aggregate, fdp, mse, power_prop
from .bench import METHODS, fit_method, run_benchmark, run_replication

__version__ = "0.1.0"

__all__ = [
    "WeightSequence", "dual_feasible", "prox_sorted_l1", "sorted_l1_norm",
    "bh_weights", "inflate", "normal_quantile", "slope_log_weights",
    "SUPPORT_THRESHOLD", "Dataset", "FitResult", "L1Penalty", "NumericalError",
    "PenaltySpec", "SlopePenalty", "debias", "e_slope", "fit_joint",
    "kkt_check", "lipschitz_bound", "objective_value", "support_set",
    "concat_objective", "default_level_grid", "fit_e_lasso", "fit_ipod",
    "fit_lasso_cv", "fit_slope_concat", "qr_complement",
    "huber_fit", "mad_scale", "robust_sigma",
    "SimulationConfig", "make_dataset", "toeplitz_gaussian_design",
    "MetricsSummary", "ReplicationRecord", "aggregate", "fdp", "mse",
    "power_prop",
    "METHODS", "fit_method", "run_benchmark", "run_replication",
]
