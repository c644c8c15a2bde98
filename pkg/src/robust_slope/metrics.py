"""Selection and estimation accuracy: FDP, power, squared error, aggregation."""

import math
from dataclasses import dataclass, fields

import numpy as np

from .solver import SUPPORT_THRESHOLD, support_set

__all__ = [
    "fdp",
    "power_prop",
    "mse",
    "ReplicationRecord",
    "MetricsSummary",
    "aggregate",
]


def fdp(estimated, true):
    """False discovery proportion |estimated \\ true| / max(|estimated|, 1)."""
    est = set(estimated)
    tru = set(true)
    return len(est - tru) / max(len(est), 1)


def power_prop(estimated, true):
    """Proportion of true indices recovered; undefined for an empty truth."""
    est = set(estimated)
    tru = set(true)
    if not tru:
        raise ValueError("power is undefined when there are no true outliers")
    return len(est & tru) / len(tru)


def mse(estimate, truth):
    """Squared Euclidean distance between two equal-length vectors."""
    a = np.asarray(estimate, dtype=float)
    b = np.asarray(truth, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("estimate and truth must be 1-d with equal length")
    d = a - b
    return float(d @ d)


@dataclass(frozen=True)
class ReplicationRecord:
    """Per-replication selection and estimation outcomes.

    ``power`` should be NaN when the replication had no true outliers.
    """

    fdp: float
    power: float
    mse_beta: float
    mse_mu: float
    discoveries: int
    false_discoveries: int


@dataclass(frozen=True)
class MetricsSummary:
    """Means and sample standard deviations over replications."""

    n_replications: int
    fdr: float
    mean_power: float
    mean_mse_beta: float
    mean_mse_mu: float
    std_fdp: float
    std_power: float
    std_mse_beta: float
    std_mse_mu: float


def _std(values):
    return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0


def aggregate(records):
    """Summarize replication records; the FDR estimate is the mean FDP."""
    records = list(records)
    if not records:
        raise ValueError("need at least one record")
    cols = {f.name: [getattr(r, f.name) for r in records]
            for f in fields(ReplicationRecord)}
    return MetricsSummary(
        n_replications=len(records),
        fdr=float(np.mean(cols["fdp"])),
        mean_power=float(np.mean(cols["power"])),
        mean_mse_beta=float(np.mean(cols["mse_beta"])),
        mean_mse_mu=float(np.mean(cols["mse_mu"])),
        std_fdp=_std(cols["fdp"]),
        std_power=_std(cols["power"]),
        std_mse_beta=_std(cols["mse_beta"]),
        std_mse_mu=_std(cols["mse_mu"]),
    )
