"""Sorted-L1 (SLOPE) norm primitives: evaluation, prox, dual feasibility.

The sorted-L1 norm with weights lambda_1 >= ... >= lambda_m >= 0 is

    J(x) = sum_j lambda_j * |x|_(j),

where |x|_(1) >= |x|_(2) >= ... are the absolute values in decreasing order.
With constant weights it reduces to a scaled L1 norm, and with all-zero
weights it vanishes.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["WeightSequence", "sorted_l1_norm", "prox_sorted_l1", "dual_feasible"]


@dataclass(frozen=True)
class WeightSequence:
    """Validated penalty weights: finite, non-negative, non-increasing.

    Wraps a read-only float array; ``np.asarray`` on an instance yields the
    underlying values, so it can be passed wherever an array is expected.
    """

    values: np.ndarray

    def __post_init__(self):
        vals = np.atleast_1d(np.asarray(self.values, dtype=float))
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("weights must form a non-empty 1-d sequence")
        if not np.all(np.isfinite(vals)):
            raise ValueError("weights must be finite")
        if np.any(vals < 0):
            raise ValueError("weights must be non-negative")
        if np.any(np.diff(vals) > 0):
            raise ValueError("weights must be non-increasing")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.size

    def __getitem__(self, idx):
        return self.values[idx]

    def __array__(self, dtype=None, copy=None):
        arr = self.values
        if dtype is not None:
            arr = arr.astype(dtype, copy=False)
        if copy:
            arr = arr.copy()
        return arr


def _as_pair(x, weights, xname):
    x = np.asarray(x, dtype=float)
    lam = np.asarray(weights, dtype=float)
    if x.ndim != 1 or lam.ndim != 1:
        raise ValueError(f"{xname} and weights must be 1-d")
    if x.size != lam.size:
        raise ValueError(
            f"length mismatch: {xname} has {x.size} entries, weights {lam.size}"
        )
    return x, lam


def sorted_l1_norm(x, weights):
    """Evaluate J(x) = sum_j weights_j * |x|_(j).

    Parameters
    ----------
    x : array-like, shape (m,)
    weights : array-like or WeightSequence, shape (m,)

    Returns
    -------
    float
    """
    x, lam = _as_pair(x, weights, "x")
    a = np.sort(np.abs(x))[::-1]
    return float(np.dot(lam, a))


def prox_sorted_l1(v, weights):
    """Proximal operator of the sorted-L1 norm.

    Returns argmin_z 0.5*||z - v||^2 + sum_j weights_j * |z|_(j), computed by
    sorting |v| in decreasing order (ties broken by original index), subtracting
    the weights, pooling adjacent violators until the sequence is
    non-increasing, clamping at zero, and undoing the sort and signs.

    Parameters
    ----------
    v : array-like, shape (m,)
    weights : array-like or WeightSequence, shape (m,)

    Returns
    -------
    ndarray, shape (m,)
    """
    v, lam = _as_pair(v, weights, "v")
    m = v.size
    if m == 0:
        return v.copy()
    sign = np.sign(v)
    a = np.abs(v)
    order = np.argsort(-a, kind="stable")
    z = a[order] - lam

    # stack of blocks: sums, means, and [lo, hi] index ranges
    blk_sum = np.empty(m)
    blk_mean = np.empty(m)
    blk_lo = np.empty(m, dtype=np.intp)
    blk_hi = np.empty(m, dtype=np.intp)
    k = 0
    for i in range(m):
        blk_lo[k] = i
        blk_hi[k] = i
        blk_sum[k] = z[i]
        blk_mean[k] = z[i]
        while k > 0 and blk_mean[k - 1] <= blk_mean[k]:
            k -= 1
            blk_hi[k] = i
            blk_sum[k] += blk_sum[k + 1]
            blk_mean[k] = blk_sum[k] / (i - blk_lo[k] + 1)
        k += 1

    pooled = np.empty(m)
    for j in range(k):
        pooled[blk_lo[j] : blk_hi[j] + 1] = max(blk_mean[j], 0.0)

    out = np.empty(m)
    out[order] = pooled
    out *= sign
    return out


def dual_feasible(g, weights, tol=1e-8):
    """Check that g lies in the scaled dual ball of the sorted-L1 norm.

    True iff every prefix sum of the decreasingly sorted |g| is at most the
    corresponding prefix sum of the weights, plus ``tol``.

    Parameters
    ----------
    g : array-like, shape (m,)
    weights : array-like or WeightSequence, shape (m,)
    tol : float, non-negative slack added to each prefix bound.  The default
        sits comfortably above double-precision accumulation error for
        vectors up to length ~1e5.

    Returns
    -------
    bool
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    g, lam = _as_pair(g, weights, "g")
    if g.size == 0:
        return True
    lhs = np.cumsum(np.sort(np.abs(g))[::-1])
    rhs = np.cumsum(lam)
    return bool(np.all(lhs <= rhs + tol))
