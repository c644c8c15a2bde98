"""Tests for penalty weight sequences and the normal quantile function."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import normal_cdf, quantile_bisect
from robust_slope import bh_weights, inflate, normal_quantile, slope_log_weights
from robust_slope.sorted_l1 import WeightSequence


def erf_series(x, terms=60):
    """Maclaurin series for erf, accurate for |x| <= 3."""
    total = 0.0
    for k in range(terms):
        total += (-1) ** k * x ** (2 * k + 1) / (math.factorial(k) * (2 * k + 1))
    return 2.0 / math.sqrt(math.pi) * total


class TestNormalQuantile:
    def test_median_is_zero(self):
        assert normal_quantile(0.5) == 0.0

    def test_upper_tail_value(self):
        assert normal_quantile(0.975) == pytest.approx(
            quantile_bisect(0.975), abs=1e-9
        )
        assert normal_quantile(0.975) == pytest.approx(1.959964, abs=1e-6)

    def test_phi_of_one_from_series(self):
        # P(Z <= 1) computed independently from the error-function series
        p = 0.5 * (1.0 + erf_series(1.0 / math.sqrt(2.0)))
        assert normal_quantile(p) == pytest.approx(1.0, abs=1e-9)
        assert normal_quantile(0.8413447) == pytest.approx(1.0, abs=1e-5)

    def test_symmetry(self):
        for p in (0.01, 0.3, 0.4999, 0.75, 0.999):
            assert normal_quantile(p) == pytest.approx(
                -normal_quantile(1.0 - p), abs=1e-12
            )

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.1])
    def test_domain_errors(self, p):
        with pytest.raises(ValueError):
            normal_quantile(p)

    def test_bisection_oracle_grid(self):
        # a denser, wider sweep lives in the acceptance suite
        ps = np.concatenate(
            [
                np.geomspace(1e-12, 0.4, 200),
                np.linspace(0.4, 0.6, 50),
                1.0 - np.geomspace(1e-12, 0.4, 200),
            ]
        )
        worst = max(abs(normal_quantile(p) - quantile_bisect(p)) for p in ps)
        assert worst <= 1e-9

    def test_round_trip_through_cdf(self):
        for p in np.linspace(0.001, 0.999, 97):
            assert normal_cdf(normal_quantile(p)) == pytest.approx(p, abs=1e-9)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(1e-10, 1.0 - 1e-10, allow_nan=False))
    def test_strictly_increasing(self, p):
        q = min(p * 1.001, p + 1e-12)
        if q <= p or q >= 1.0:
            return
        assert normal_quantile(q) > normal_quantile(p)


class TestSlopeLogWeights:
    def test_two_entry_values(self):
        w = slope_log_weights(2, 1.0)
        np.testing.assert_allclose(
            np.asarray(w),
            [math.sqrt(math.log(4.0)), math.sqrt(math.log(2.0))],
            atol=1e-12,
        )
        np.testing.assert_allclose(np.asarray(w), [1.177410, 0.832555], atol=1e-6)

    def test_last_entry_is_sqrt_log_two(self):
        for m in (1, 5, 100):
            w = slope_log_weights(m, 1.0)
            assert w[-1] == pytest.approx(math.sqrt(math.log(2.0)), abs=1e-12)

    def test_linear_in_sigma(self):
        w1 = np.asarray(slope_log_weights(7, 1.0))
        w2 = np.asarray(slope_log_weights(7, 2.0))
        np.testing.assert_allclose(w2, 2.0 * w1, rtol=1e-12)

    def test_strictly_decreasing(self):
        w = np.asarray(slope_log_weights(50, 1.3))
        assert np.all(np.diff(w) < 0)

    @pytest.mark.parametrize("m,sigma", [(0, 1.0), (-1, 1.0), (3, 0.0), (3, -1.0)])
    def test_domain_errors(self, m, sigma):
        with pytest.raises(ValueError):
            slope_log_weights(m, sigma)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 200), st.floats(0.01, 10.0, allow_nan=False))
    def test_valid_weight_sequence(self, m, sigma):
        w = slope_log_weights(m, sigma)
        # constructing the validated type re-checks the invariants
        WeightSequence(np.asarray(w))


class TestBHWeights:
    def test_single_entry(self):
        w = bh_weights(1, 0.05, 1.0)
        assert w[0] == pytest.approx(quantile_bisect(0.975), abs=1e-9)
        assert w[0] == pytest.approx(1.959964, abs=1e-6)

    def test_two_entries(self):
        w = bh_weights(2, 0.05, 1.0)
        np.testing.assert_allclose(
            np.asarray(w), [2.241403, 1.959964], atol=1e-6
        )
        np.testing.assert_allclose(
            np.asarray(w),
            [quantile_bisect(0.9875), quantile_bisect(0.975)],
            atol=1e-9,
        )

    def test_linear_in_sigma(self):
        w1 = np.asarray(bh_weights(5, 0.1, 1.0))
        w3 = np.asarray(bh_weights(5, 0.1, 3.0))
        np.testing.assert_allclose(w3, 3.0 * w1, rtol=1e-12)

    @pytest.mark.parametrize(
        "m,q,sigma",
        [(0, 0.05, 1.0), (3, 0.0, 1.0), (3, 1.0, 1.0), (3, 0.05, 0.0), (3, 0.05, -2.0)],
    )
    def test_domain_errors(self, m, q, sigma):
        with pytest.raises(ValueError):
            bh_weights(m, q, sigma)

    def test_first_entry_bound(self):
        # largest weight stays below the universal-threshold bound
        for m, q in [(100, 0.05), (1000, 0.05), (500, 0.1), (50, 0.2)]:
            w = bh_weights(m, q, 1.0)
            assert w[0] <= math.sqrt(2.0 * math.log(2.0 * m / q))

    @settings(max_examples=50, deadline=None)
    @given(
        st.integers(1, 300),
        st.floats(0.001, 0.999, allow_nan=False),
        st.floats(0.01, 10.0, allow_nan=False),
    )
    def test_valid_and_positive(self, m, q, sigma):
        w = bh_weights(m, q, sigma)
        WeightSequence(np.asarray(w))
        assert np.all(np.asarray(w) > 0)


class TestInflate:
    def test_zero_eps_identity(self):
        w = bh_weights(4, 0.05, 1.0)
        np.testing.assert_array_equal(np.asarray(inflate(w, 0.0)), np.asarray(w))

    def test_hand_example(self):
        out = inflate(WeightSequence(np.array([2.0, 1.0])), 0.5)
        np.testing.assert_allclose(np.asarray(out), [3.0, 1.5], atol=1e-12)

    def test_negative_eps_rejected(self):
        with pytest.raises(ValueError):
            inflate(WeightSequence(np.array([1.0])), -0.1)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 50), st.floats(0.0, 5.0, allow_nan=False))
    def test_preserves_invariants(self, m, eps):
        w = slope_log_weights(m, 1.0)
        out = inflate(w, eps)
        WeightSequence(np.asarray(out))
        np.testing.assert_allclose(
            np.asarray(out), (1.0 + eps) * np.asarray(w), rtol=1e-12
        )
