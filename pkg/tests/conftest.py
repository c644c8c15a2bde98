"""Shared pytest fixtures and helpers for the test suite."""

import numpy as np
import pytest

# one line per acceptance criterion, shown in the terminal summary so the
# PASS/FAIL verdicts are visible even when every test passes
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_weights(rng, m, scale=3.0):
    """Random valid weight sequence: non-negative, non-increasing."""
    w = np.sort(rng.uniform(0.0, scale, m))[::-1]
    return w.copy()


def random_normalized_design(rng, n, p):
    """Random design with unit-norm columns (p may be 0)."""
    X = rng.normal(size=(n, p))
    if p:
        X /= np.linalg.norm(X, axis=0)
    return X


@pytest.fixture
def rng():
    return np.random.default_rng(0)
