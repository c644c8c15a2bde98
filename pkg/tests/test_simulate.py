"""Tests for synthetic data generation: designs, shifts, determinism."""

import math

import numpy as np
import pytest

from robust_slope import (
    SimulationConfig,
    make_dataset,
    toeplitz_gaussian_design,
)


class TestConfigValidation:
    def test_defaults_valid(self):
        cfg = SimulationConfig(n=100, p=5)
        assert cfg.k == "dense"
        assert cfg.outlier_count == 5

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n=0, p=1),
            dict(n=10, p=-1),
            dict(n=10, p=2, corr=1.0),
            dict(n=10, p=2, corr=-0.1),
            dict(n=10, p=2, k=3),
            dict(n=10, p=2, k=-1),
            dict(n=10, p=2, outlier_fraction=0.6),
            dict(n=10, p=2, outlier_fraction=-0.05),
            dict(n=10, p=2, outlier_fraction=0.05),  # floor(0.5) = 0
            dict(n=10, p=2, magnitude="medium"),
            dict(n=10, p=2, magnitude=0.0),
            dict(n=10, p=2, magnitude=-2.0),
            dict(n=10, p=2, sigma=0.0),
        ],
    )
    def test_invalid_configs_rejected(self, kwargs):
        with pytest.raises(ValueError):
            SimulationConfig(**kwargs)

    def test_zero_fraction_allowed(self):
        cfg = SimulationConfig(n=50, p=0, outlier_fraction=0.0)
        assert cfg.outlier_count == 0

    def test_outlier_count_floor(self):
        cfg = SimulationConfig(n=1000, p=2, outlier_fraction=0.0153)
        assert cfg.outlier_count == 15

    def test_magnitude_values(self):
        base = math.sqrt(2.0 * math.log(400.0))
        assert SimulationConfig(n=400, p=1, magnitude="low").magnitude_value == pytest.approx(base)
        assert SimulationConfig(n=400, p=1, magnitude="high").magnitude_value == pytest.approx(5 * base)
        assert SimulationConfig(n=400, p=1, magnitude=7.5).magnitude_value == 7.5


class TestToeplitzDesign:
    def test_unit_columns(self):
        X = toeplitz_gaussian_design(50, 8, 0.7, seed=0)
        np.testing.assert_allclose(np.linalg.norm(X, axis=0), 1.0, atol=1e-12)

    def test_deterministic(self):
        X1 = toeplitz_gaussian_design(30, 4, 0.4, seed=9)
        X2 = toeplitz_gaussian_design(30, 4, 0.4, seed=9)
        np.testing.assert_array_equal(X1, X2)

    def test_seed_changes_draw(self):
        X1 = toeplitz_gaussian_design(30, 4, 0.4, seed=0)
        X2 = toeplitz_gaussian_design(30, 4, 0.4, seed=1)
        assert not np.array_equal(X1, X2)

    def test_empirical_correlation_structure(self):
        n = 4000
        X = toeplitz_gaussian_design(n, 6, 0.5, seed=3)
        Xc = X * math.sqrt(n)  # undo normalization scale for correlations
        corr = np.corrcoef(Xc, rowvar=False)
        offdiag = corr[np.triu_indices(6, 1)]
        want = np.array([0.5 ** abs(i - j) for i in range(6) for j in range(i + 1, 6)])
        np.testing.assert_allclose(offdiag, want, atol=0.06)

    def test_independent_when_rho_zero(self):
        X = toeplitz_gaussian_design(2000, 5, 0.0, seed=5)
        corr = np.corrcoef(X, rowvar=False)
        assert np.max(np.abs(corr[np.triu_indices(5, 1)])) < 0.1

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            toeplitz_gaussian_design(10, 2, 1.0, seed=0)
        with pytest.raises(ValueError):
            toeplitz_gaussian_design(0, 2, 0.0, seed=0)


class TestMakeDataset:
    def test_bit_reproducible(self):
        cfg = SimulationConfig(n=200, p=10, corr=0.4, k=3, outlier_fraction=0.05,
                               magnitude="high", sigma=1.0, seed=14)
        d1, d2 = make_dataset(cfg), make_dataset(cfg)
        np.testing.assert_array_equal(d1.X, d2.X)
        np.testing.assert_array_equal(d1.y, d2.y)
        np.testing.assert_array_equal(d1.mu_star, d2.mu_star)
        assert d1.outlier_support == d2.outlier_support

    def test_truth_bookkeeping(self):
        cfg = SimulationConfig(n=300, p=4, outlier_fraction=0.1, seed=2)
        d = make_dataset(cfg)
        assert len(d.outlier_support) == 30
        assert d.outlier_support == frozenset(np.flatnonzero(d.mu_star).tolist())
        np.testing.assert_allclose(
            d.mu_star[sorted(d.outlier_support)], cfg.magnitude_value
        )

    def test_dense_coefficients(self):
        cfg = SimulationConfig(n=100, p=20, k="dense", seed=3)
        d = make_dataset(cfg)
        np.testing.assert_allclose(d.beta_star, math.sqrt(2 * math.log(20)), atol=1e-12)
        assert d.beta_star[0] == pytest.approx(2.4477, abs=1e-4)

    def test_sparse_coefficients(self):
        cfg = SimulationConfig(n=100, p=50, k=7, seed=4)
        d = make_dataset(cfg)
        nz = np.flatnonzero(d.beta_star)
        assert nz.size == 7
        np.testing.assert_allclose(d.beta_star[nz], math.sqrt(2 * math.log(50)))

    def test_column_free_design(self):
        cfg = SimulationConfig(n=60, p=0, outlier_fraction=0.1, seed=5)
        d = make_dataset(cfg)
        assert d.X.shape == (60, 0)
        assert d.beta_star.size == 0
        assert len(d.outlier_support) == 6

    def test_no_outliers(self):
        cfg = SimulationConfig(n=80, p=3, outlier_fraction=0.0, seed=6)
        d = make_dataset(cfg)
        assert d.outlier_support == frozenset()
        np.testing.assert_array_equal(d.mu_star, 0.0)

    def test_random_sign_flag(self):
        cfg = SimulationConfig(n=400, p=2, outlier_fraction=0.25,
                               magnitude=8.0, random_sign=True, seed=7)
        d = make_dataset(cfg)
        vals = d.mu_star[sorted(d.outlier_support)]
        assert np.all(np.abs(vals) == 8.0)
        assert np.any(vals > 0) and np.any(vals < 0)

    def test_noise_centering(self):
        cfg = SimulationConfig(n=20000, p=2, outlier_fraction=0.0, sigma=1.0, seed=8)
        d = make_dataset(cfg)
        eps = d.y - d.X @ d.beta_star - d.mu_star
        assert abs(float(np.mean(eps))) <= 3.0 / math.sqrt(cfg.n)

    def test_dataset_is_normalized(self):
        d = make_dataset(SimulationConfig(n=50, p=5, corr=0.9, seed=9))
        assert d.column_normalized
        np.testing.assert_allclose(np.linalg.norm(d.X, axis=0), 1.0, atol=1e-12)
