"""Penalty weight sequences and the normal quantile used to build them."""

import math

import numpy as np

from .sorted_l1 import WeightSequence

__all__ = ["normal_quantile", "slope_log_weights", "bh_weights", "inflate"]

_SQRT2 = math.sqrt(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)

# rational approximation coefficients for the inverse normal CDF
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def _quantile_approx(p):
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return ((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q
                 + _C[5])
                / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    if p > 1.0 - _P_LOW:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        return -((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q
                  + _C[5])
                 / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    q = p - 0.5
    r = q * q
    return ((((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r
             + _A[5]) * q
            / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r
               + 1.0))


def normal_quantile(p):
    """Inverse standard normal CDF.

    Piecewise rational approximation followed by one Newton correction on the
    erfc-based CDF; absolute error is far below 1e-9 away from the extreme
    tails.  The CDF residual is formed as ``(1 - p) - Q(x)`` in the upper half
    so that no precision is lost to cancellation (1 - p is exact for
    p >= 1/2).

    Parameters
    ----------
    p : float in (0, 1)

    Returns
    -------
    float
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie strictly between 0 and 1")
    x = _quantile_approx(p)
    if p < 0.5:
        resid = 0.5 * math.erfc(-x / _SQRT2) - p
    else:
        resid = (1.0 - p) - 0.5 * math.erfc(x / _SQRT2)
    density = math.exp(-0.5 * x * x) / _SQRT_2PI
    if density > 1e-280:
        x -= resid / density
    return x


def slope_log_weights(m, sigma):
    """Logarithmic weight sequence sigma * sqrt(log(2m / i)), i = 1..m.

    Strictly decreasing and positive; the last entry is sigma * sqrt(log 2).
    """
    m = int(m)
    if m < 1:
        raise ValueError("m must be a positive integer")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    i = np.arange(1, m + 1, dtype=float)
    return WeightSequence(sigma * np.sqrt(np.log(2.0 * m / i)))


def bh_weights(m, q, sigma):
    """Quantile-based weight sequence sigma * Phi^{-1}(1 - i*q / (2m)), i = 1..m.

    Non-increasing and positive for q in (0, 1); the first entry is bounded by
    sigma * sqrt(2 * log(2m / q)).
    """
    m = int(m)
    if m < 1:
        raise ValueError("m must be a positive integer")
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie strictly between 0 and 1")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    vals = np.array(
        [normal_quantile(1.0 - i * q / (2.0 * m)) for i in range(1, m + 1)]
    )
    return WeightSequence(sigma * vals)


def inflate(weights, eps):
    """Scale a weight sequence by (1 + eps), eps >= 0."""
    if eps < 0:
        raise ValueError("eps must be non-negative")
    return WeightSequence((1.0 + eps) * np.asarray(weights, dtype=float))
