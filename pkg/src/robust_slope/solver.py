"""Joint estimation of regression coefficients and per-observation shifts.

Model: y = X beta + mu + noise, where a nonzero mu_i marks observation i as
an outlier.  The solver minimizes

    ||y - X beta - mu||^2 + P_beta(beta) + 2 * rho2 * J_lam(mu)

with J the sorted-L1 norm and P_beta either absent, a scaled L1 norm
(2 * nu * ||beta||_1), or another sorted-L1 term (2 * rho1 * J).
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .sorted_l1 import WeightSequence, dual_feasible, prox_sorted_l1, sorted_l1_norm
from .weights import bh_weights, inflate

__all__ = [
    "NumericalError",
    "Dataset",
    "L1Penalty",
    "SlopePenalty",
    "PenaltySpec",
    "FitResult",
    "SUPPORT_THRESHOLD",
    "support_set",
    "objective_value",
    "lipschitz_bound",
    "kkt_check",
    "fit_joint",
    "e_slope",
    "debias",
]

# entries of |mu_hat| above this are reported as discovered outliers
SUPPORT_THRESHOLD = 1e-8


class NumericalError(RuntimeError):
    """Raised when a computation fails numerically (rank deficiency etc.)."""


def _read_only(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Dataset:
    """Immutable regression data, optionally carrying simulation ground truth.

    ``outlier_support`` holds 0-based indices of the truly shifted
    observations; it must agree with the nonzeros of ``mu_star`` when both are
    present.
    """

    X: np.ndarray
    y: np.ndarray
    column_normalized: bool = False
    beta_star: np.ndarray | None = None
    mu_star: np.ndarray | None = None
    outlier_support: frozenset | None = None

    def __post_init__(self):
        X = _read_only(self.X)
        y = _read_only(self.y)
        if X.ndim != 2:
            raise ValueError("X must be 2-d")
        if y.ndim != 1 or y.size != X.shape[0]:
            raise ValueError("y must be 1-d with one entry per row of X")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise ValueError("X and y must be finite")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        if self.column_normalized and X.shape[1] > 0:
            norms = np.linalg.norm(X, axis=0)
            if np.any(np.abs(norms - 1.0) > 1e-10):
                raise ValueError("column_normalized is set but columns are not unit-norm")
        if self.beta_star is not None:
            b = _read_only(self.beta_star)
            if b.shape != (X.shape[1],):
                raise ValueError("beta_star must have one entry per column of X")
            object.__setattr__(self, "beta_star", b)
        if self.mu_star is not None:
            m = _read_only(self.mu_star)
            if m.shape != y.shape:
                raise ValueError("mu_star must have one entry per observation")
            object.__setattr__(self, "mu_star", m)
        if self.outlier_support is not None:
            sup = frozenset(int(i) for i in self.outlier_support)
            if sup and (min(sup) < 0 or max(sup) >= y.size):
                raise ValueError("outlier_support indices out of range")
            object.__setattr__(self, "outlier_support", sup)
            if self.mu_star is not None:
                nz = frozenset(np.flatnonzero(self.mu_star != 0).tolist())
                if nz != sup:
                    raise ValueError("outlier_support disagrees with nonzeros of mu_star")

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]


@dataclass(frozen=True)
class L1Penalty:
    """Adds 2 * level * ||beta||_1 to the objective."""

    level: float

    def __post_init__(self):
        if not self.level > 0:
            raise ValueError("l1 level must be positive")


@dataclass(frozen=True)
class SlopePenalty:
    """Adds 2 * scale * J_weights(.) to the objective."""

    weights: WeightSequence
    scale: float = 1.0

    def __post_init__(self):
        if not isinstance(self.weights, WeightSequence):
            object.__setattr__(self, "weights", WeightSequence(self.weights))
        if not self.scale > 0:
            raise ValueError("scale must be positive")


@dataclass(frozen=True)
class PenaltySpec:
    """Penalty pair: ``beta`` may be None, L1Penalty, or SlopePenalty;
    ``mu`` is always a SlopePenalty."""

    beta: L1Penalty | SlopePenalty | None
    mu: SlopePenalty

    def __post_init__(self):
        if not isinstance(self.mu, SlopePenalty):
            raise TypeError("mu penalty must be a SlopePenalty")
        if self.beta is not None and not isinstance(self.beta, (L1Penalty, SlopePenalty)):
            raise TypeError("beta penalty must be None, L1Penalty, or SlopePenalty")


@dataclass(frozen=True)
class FitResult:
    """Estimates plus solver diagnostics.

    ``outlier_support`` contains 0-based indices i with |mu_hat_i| above the
    support threshold.  ``objective`` is the penalized objective at the
    returned estimates.  ``penalty`` records the PenaltySpec actually used,
    when the fit is expressible as one (None for the concatenated variant).
    """

    beta_hat: np.ndarray
    mu_hat: np.ndarray
    outlier_support: frozenset
    objective: float
    iterations: int
    converged: bool
    kkt_beta_ok: bool
    kkt_mu_ok: bool
    penalty: PenaltySpec | None = None

    def __post_init__(self):
        object.__setattr__(self, "beta_hat", _read_only(self.beta_hat))
        object.__setattr__(self, "mu_hat", _read_only(self.mu_hat))
        object.__setattr__(self, "outlier_support", frozenset(self.outlier_support))


def support_set(v, threshold=SUPPORT_THRESHOLD):
    """Indices (0-based) whose magnitude exceeds the support threshold."""
    return frozenset(np.flatnonzero(np.abs(np.asarray(v)) > threshold).tolist())


def _check_penalty_dims(pen, n, p):
    if len(pen.mu.weights) != n:
        raise ValueError(
            f"mu penalty has {len(pen.mu.weights)} weights for {n} observations"
        )
    if isinstance(pen.beta, SlopePenalty) and len(pen.beta.weights) != p:
        raise ValueError(
            f"beta penalty has {len(pen.beta.weights)} weights for {p} columns"
        )


def objective_value(data, beta, mu, pen):
    """Penalized objective at (beta, mu).

    ||y - X beta - mu||^2 plus 2*nu*||beta||_1 or 2*rho1*J(beta) (depending on
    the beta penalty) plus 2*rho2*J(mu).
    """
    beta = np.asarray(beta, dtype=float)
    mu = np.asarray(mu, dtype=float)
    if beta.shape != (data.p,) or mu.shape != (data.n,):
        raise ValueError("beta/mu shapes do not match the data")
    _check_penalty_dims(pen, data.n, data.p)
    r = data.y - data.X @ beta - mu
    val = float(r @ r)
    if isinstance(pen.beta, L1Penalty):
        val += 2.0 * pen.beta.level * float(np.sum(np.abs(beta)))
    elif isinstance(pen.beta, SlopePenalty):
        val += 2.0 * pen.beta.scale * sorted_l1_norm(beta, pen.beta.weights)
    val += 2.0 * pen.mu.scale * sorted_l1_norm(mu, pen.mu.weights)
    return val


def lipschitz_bound(X, rtol=1e-6, max_iter=10_000):
    """sigma_max(X)^2 + 1, the largest eigenvalue of [X I]^T [X I].

    Computed by power iteration on X^T X (through matrix-vector products) to
    relative tolerance ``rtol``; deterministic via a fixed starting vector.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be 2-d")
    n, p = X.shape
    if n == 0 or p == 0:
        return 1.0
    rng = np.random.default_rng(0)
    v = rng.standard_normal(p)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = X.T @ (X @ v)
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return 1.0
        lam_new = float(v @ w)
        v = w / norm_w
        if abs(lam_new - lam) <= rtol * abs(lam_new):
            lam = lam_new
            break
        lam = lam_new
    return lam + 1.0


def _kkt_beta(X, r, pen_beta, tol):
    if X.shape[1] == 0:
        return True
    g = X.T @ r
    if pen_beta is None:
        return bool(np.max(np.abs(g), initial=0.0) <= tol)
    if isinstance(pen_beta, L1Penalty):
        return bool(np.max(np.abs(g), initial=0.0) <= pen_beta.level + tol)
    return dual_feasible(g, pen_beta.scale * np.asarray(pen_beta.weights), tol)


def kkt_check(data, beta, mu, pen, tol=1e-6):
    """First-order certificates for the joint objective at (beta, mu).

    Returns (beta_ok, mu_ok): the residual r = y - X beta - mu must be
    majorized by the scaled mu-weights, and X^T r must satisfy the matching
    condition for the beta penalty (zero, sup-norm bound, or majorization).
    """
    beta = np.asarray(beta, dtype=float)
    mu = np.asarray(mu, dtype=float)
    r = data.y - data.X @ beta - mu
    mu_ok = dual_feasible(r, pen.mu.scale * np.asarray(pen.mu.weights), tol)
    beta_ok = _kkt_beta(data.X, r, pen.beta, tol)
    return beta_ok, mu_ok


def fit_joint(data, pen, max_iter=20_000, tol=1e-8, kkt_tol=1e-6,
              restart=True, accelerate=True):
    """Minimize the joint objective by accelerated proximal gradient descent.

    Momentum follows the classical t-sequence on the concatenated (beta, mu)
    vector; when ``restart`` is set, any objective increase resets the
    momentum (the offending step is recomputed as a plain descent step).
    Gradient steps use 1/(2*lipschitz_bound(X)) against the gradient of the
    squared-norm term.  Whenever the relative objective decrease over a
    10-iteration window falls below ``tol``, the shift block is minimized
    exactly (a single full-step prox, since its design is the identity; the
    objective never increases) and convergence is declared if both KKT
    certificates hold at ``kkt_tol`` on the refined point; stops at
    ``max_iter`` regardless, with ``converged=False`` if the criteria were
    not met.

    Returns a FitResult; ``mu_hat`` entries above SUPPORT_THRESHOLD in
    magnitude form the reported outlier support.
    """
    if not isinstance(pen, PenaltySpec):
        raise TypeError("pen must be a PenaltySpec")
    X, y = data.X, data.y
    n, p = X.shape
    _check_penalty_dims(pen, n, p)
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise ValueError("X and y must be finite")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if not data.column_normalized:
        warnings.warn(
            "design columns are not unit-normalized; penalty levels assume they are",
            UserWarning,
            stacklevel=2,
        )

    bound = lipschitz_bound(X)
    step = 1.0 / bound  # descent step for the half-squared-residual form
    lam_mu_full = pen.mu.scale * np.asarray(pen.mu.weights)
    lam_mu = step * lam_mu_full
    if isinstance(pen.beta, SlopePenalty):
        lam_beta = step * pen.beta.scale * np.asarray(pen.beta.weights)

        def prox_beta(w):
            return prox_sorted_l1(w, lam_beta)

    elif isinstance(pen.beta, L1Penalty):
        thresh = step * pen.beta.level

        def prox_beta(w):
            return np.sign(w) * np.maximum(np.abs(w) - thresh, 0.0)

    else:

        def prox_beta(w):
            return w

    def objective(b, m):
        return objective_value(data, b, m, pen)

    beta = np.zeros(p)
    mu = np.zeros(n)
    zb, zm = beta.copy(), mu.copy()
    t = 1.0
    f = objective(beta, mu)
    window = [f]
    converged = False
    iterations = 0

    def forward_backward(b, m):
        r = y - X @ b - m
        nb = prox_beta(b + step * (X.T @ r))
        nm = prox_sorted_l1(m + step * r, lam_mu)
        return nb, nm

    for iterations in range(1, max_iter + 1):
        cand_b, cand_m = forward_backward(zb, zm)
        f_cand = objective(cand_b, cand_m)
        if accelerate and restart and f_cand > f:
            # momentum overshoot: restart from the current iterate
            t = 1.0
            cand_b, cand_m = forward_backward(beta, mu)
            f_cand = objective(cand_b, cand_m)
            if f_cand > f:
                cand_b, cand_m, f_cand = beta, mu, f
        if accelerate:
            t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
            gamma = (t - 1.0) / t_next
            zb = cand_b + gamma * (cand_b - beta)
            zm = cand_m + gamma * (cand_m - mu)
            t = t_next
        else:
            zb, zm = cand_b, cand_m
        beta, mu, f = cand_b, cand_m, f_cand

        window.append(f)
        if len(window) > 11:
            window.pop(0)
        if len(window) == 11 and window[0] - f <= tol * max(1.0, abs(f)):
            # Exact minimization over the shift block (its design is the
            # identity, so one full-step prox solves it): the new residual is
            # dual-feasible by construction and the objective never increases.
            # Momentum restarts from the refined point.
            swept = prox_sorted_l1(y - X @ beta, lam_mu_full)
            f_swept = objective(beta, swept)
            if f_swept <= f:
                mu, f = swept, f_swept
                zb, zm, t = beta.copy(), mu.copy(), 1.0
            if window[0] - f <= tol * max(1.0, abs(f)):
                beta_ok, mu_ok = kkt_check(data, beta, mu, pen, kkt_tol)
                if beta_ok and mu_ok:
                    converged = True
                    break
            window = [f]  # keep iterating toward the certificates

    beta_ok, mu_ok = kkt_check(data, beta, mu, pen, kkt_tol)
    return FitResult(
        beta_hat=beta,
        mu_hat=mu,
        outlier_support=support_set(mu),
        objective=objective(beta, mu),
        iterations=iterations,
        converged=converged and beta_ok and mu_ok,
        kkt_beta_ok=beta_ok,
        kkt_mu_ok=mu_ok,
        penalty=pen,
    )


def e_slope(data, sigma, q=0.05, eps=0.0, penalize_beta=False, **solver_opts):
    """Outlier-detection fit with quantile-based weights at target level q.

    The shift penalty uses weights inflate(bh_weights(n, q, sigma), eps) with
    unit scale.  With ``penalize_beta`` (for designs with many columns) the
    coefficients get the analogous sequence built from p; otherwise beta is
    left unpenalized.  Extra keyword arguments go to fit_joint.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    mu_pen = SlopePenalty(inflate(bh_weights(data.n, q, sigma), eps), 1.0)
    if penalize_beta:
        if data.p < 1:
            raise ValueError("penalize_beta requires at least one column")
        beta_pen = SlopePenalty(inflate(bh_weights(data.p, q, sigma), eps), 1.0)
    else:
        beta_pen = None
    return fit_joint(data, PenaltySpec(beta_pen, mu_pen), **solver_opts)


def debias(data, outlier_support):
    """Refit by least squares after removing the flagged observations.

    Returns (beta, mu): beta is the OLS solution on the complement of
    ``outlier_support`` and mu matches the residual y_i - x_i beta exactly on
    the support (zero elsewhere).  Requires at least p clean rows; raises
    NumericalError if the reduced design is rank deficient.
    """
    support = sorted({int(i) for i in outlier_support})
    if support and (support[0] < 0 or support[-1] >= data.n):
        raise ValueError("outlier_support indices out of range")
    keep = np.setdiff1d(np.arange(data.n), support)
    if keep.size < data.p:
        raise ValueError("fewer clean rows than columns; cannot refit")
    if data.p == 0:
        beta = np.zeros(0)
    else:
        beta, _, rank, _ = np.linalg.lstsq(data.X[keep], data.y[keep], rcond=None)
        if rank < data.p:
            raise NumericalError("reduced design is rank deficient")
    mu = np.zeros(data.n)
    if support:
        idx = np.asarray(support)
        mu[idx] = data.y[idx] - data.X[idx] @ beta
    return beta, mu
