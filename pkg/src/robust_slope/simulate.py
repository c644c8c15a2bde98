"""Synthetic mean-shift data: correlated Gaussian designs, shifted responses."""

import math
from dataclasses import dataclass

import numpy as np

from .solver import Dataset, NumericalError

__all__ = ["SimulationConfig", "toeplitz_gaussian_design", "make_dataset"]


@dataclass(frozen=True)
class SimulationConfig:
    """Recipe for one synthetic dataset.

    ``k`` is the number of nonzero regression coefficients ("dense" = all p).
    ``magnitude`` sets the true shift size: "low" = sqrt(2 log n),
    "high" = 5 sqrt(2 log n), or any explicit positive value.  Shifts are
    positive unless ``random_sign`` is set.  ``outlier_fraction`` may be zero
    (pure-noise data); otherwise floor(fraction * n) must be at least 1.
    """

    n: int
    p: int
    corr: float = 0.0
    k: int | str = "dense"
    outlier_fraction: float = 0.05
    magnitude: float | str = "high"
    sigma: float = 1.0
    random_sign: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.p < 0:
            raise ValueError("p must be non-negative")
        if not 0.0 <= self.corr < 1.0:
            raise ValueError("corr must lie in [0, 1)")
        if self.k != "dense":
            k = int(self.k)
            if not 0 <= k <= self.p:
                raise ValueError("k must lie in [0, p] or be 'dense'")
            object.__setattr__(self, "k", k)
        if not 0.0 <= self.outlier_fraction <= 0.5:
            raise ValueError("outlier_fraction must lie in [0, 0.5]")
        if self.outlier_fraction > 0 and self.outlier_count == 0:
            raise ValueError("outlier_fraction too small: floor(fraction*n) is zero")
        if isinstance(self.magnitude, str):
            if self.magnitude not in ("low", "high"):
                raise ValueError("magnitude must be 'low', 'high', or a number")
        elif not self.magnitude > 0:
            raise ValueError("numeric magnitude must be positive")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    @property
    def outlier_count(self):
        return int(math.floor(self.outlier_fraction * self.n))

    @property
    def magnitude_value(self):
        base = math.sqrt(2.0 * math.log(self.n))
        if self.magnitude == "low":
            return base
        if self.magnitude == "high":
            return 5.0 * base
        return float(self.magnitude)


def toeplitz_gaussian_design(n, p, rho, seed):
    """Design with i.i.d. N(0, Sigma) rows, Sigma_jk = rho^|j-k|, unit-norm columns.

    ``seed`` may be an integer or an existing numpy Generator.
    """
    if n < 1 or p < 1:
        raise ValueError("n and p must be at least 1")
    if not 0.0 <= rho < 1.0:
        raise ValueError("rho must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    if rho != 0.0:
        cov = rho ** np.abs(np.subtract.outer(np.arange(p), np.arange(p)))
        X = X @ np.linalg.cholesky(cov).T
    norms = np.linalg.norm(X, axis=0)
    if np.any(norms == 0.0):
        raise NumericalError("drew a zero column; cannot normalize")
    return X / norms


def make_dataset(cfg):
    """Draw a Dataset according to ``cfg``; bit-reproducible given cfg.seed.

    Nonzero coefficients all equal sqrt(2 log p); with k="dense" every
    coefficient is nonzero, otherwise k positions are chosen uniformly.
    The shifted observations are a uniform subset of size
    floor(outlier_fraction * n).
    """
    rng = np.random.default_rng(cfg.seed)
    n, p = cfg.n, cfg.p
    if p >= 1:
        X = toeplitz_gaussian_design(n, p, cfg.corr, rng)
        beta = np.zeros(p)
        value = math.sqrt(2.0 * math.log(p)) if p > 1 else 0.0
        if cfg.k == "dense":
            beta[:] = value
        elif cfg.k > 0:
            beta[np.sort(rng.choice(p, size=cfg.k, replace=False))] = value
    else:
        X = np.zeros((n, 0))
        beta = np.zeros(0)
    s = cfg.outlier_count
    mu = np.zeros(n)
    support = np.sort(rng.choice(n, size=s, replace=False)) if s > 0 else np.empty(0, int)
    if s > 0:
        shift = np.full(s, cfg.magnitude_value)
        if cfg.random_sign:
            shift = shift * rng.choice([-1.0, 1.0], size=s)
        mu[support] = shift
    y = X @ beta + mu + rng.normal(0.0, cfg.sigma, size=n)
    return Dataset(
        X=X,
        y=y,
        column_normalized=True,
        beta_star=beta,
        mu_star=mu,
        outlier_support=frozenset(support.tolist()),
    )
