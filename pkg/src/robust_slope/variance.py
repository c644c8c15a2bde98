"""Robust noise-scale estimation: Huber regression plus the scaled MAD."""

import warnings

import numpy as np

from .solver import Dataset, NumericalError

__all__ = ["huber_fit", "robust_sigma", "mad_scale"]

MAD_FACTOR = 1.4826
DEFAULT_TUNING = 1.345


def mad_scale(r):
    """1.4826 times the median absolute deviation about the median."""
    r = np.asarray(r, dtype=float)
    if r.size == 0:
        raise ValueError("need at least one residual")
    return MAD_FACTOR * float(np.median(np.abs(r - np.median(r))))


def _wls(X, y, w):
    sw = np.sqrt(w)
    beta, _, rank, _ = np.linalg.lstsq(sw[:, None] * X, sw * y, rcond=None)
    if rank < X.shape[1]:
        raise NumericalError("design is rank deficient")
    return beta


def huber_fit(data, tuning=DEFAULT_TUNING, max_iter=100, tol=1e-8):
    """Huber-loss regression by iteratively reweighted least squares.

    The scale is re-estimated from the current residuals at every iteration
    (MAD about the median, scaled by 1.4826).  Starts from ordinary least
    squares; stops when the coefficient change falls below ``tol``.  Emits a
    warning and returns the last iterate if ``max_iter`` is exhausted.
    """
    if not tuning > 0:
        raise ValueError("tuning must be positive")
    X, y = data.X, data.y
    n, p = X.shape
    if p < 1 or n <= p:
        raise ValueError("need more observations than columns (and p >= 1)")
    beta = _wls(X, y, np.ones(n))
    for _ in range(max_iter):
        r = y - X @ beta
        scale = mad_scale(r)
        if scale <= np.finfo(float).tiny:
            return beta  # residuals (essentially) constant: nothing to reweight
        c = tuning * scale
        a = np.abs(r)
        w = np.where(a <= c, 1.0, c / np.maximum(a, np.finfo(float).tiny))
        beta_new = _wls(X, y, w)
        if np.max(np.abs(beta_new - beta)) <= tol * (1.0 + np.max(np.abs(beta))):
            return beta_new
        beta = beta_new
    warnings.warn("huber_fit did not converge", UserWarning, stacklevel=2)
    return beta


def robust_sigma(data, tuning=DEFAULT_TUNING, max_iter=100, tol=1e-8):
    """Noise-scale estimate: scaled MAD of the Huber-fit residuals.

    With a column-free design the residuals are the responses themselves.
    A zero estimate (degenerate data) is returned with a warning.
    """
    if data.p == 0:
        r = data.y
    else:
        beta = huber_fit(data, tuning=tuning, max_iter=max_iter, tol=tol)
        r = data.y - data.X @ beta
    sigma = mad_scale(r)
    if sigma <= 1e-12 * max(1.0, float(np.max(np.abs(data.y), initial=0.0))):
        warnings.warn("degenerate residuals: estimated scale is zero",
                      UserWarning, stacklevel=2)
        return 0.0
    return sigma
