"""
This module contains the tests of the reference estimators.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from limes_toolkit.bench.baselines import (
    baseline_huber,
    baseline_lad_ridge,
    baseline_ols,
    baseline_ridge,
    huber_objective,
)
from limes_toolkit.errors import InputError
from limes_toolkit.solvers.config import SolverConfig

TIGHT = SolverConfig(max_iter=100_000, rel_tol=1e-13, record_trace=False)


def test_baseline_ols__overdetermined(rng: np.random.Generator) -> None:
    a, y = rng.standard_normal((12, 4)), rng.standard_normal(12)
    assert_allclose(baseline_ols(a, y), np.linalg.lstsq(a, y, rcond=None)[0], atol=1e-10)


def test_baseline_ols__underdetermined_is_minimum_norm(rng: np.random.Generator) -> None:
    a, y = rng.standard_normal((4, 10)), rng.standard_normal(4)
    x = baseline_ols(a, y)
    assert_allclose(a @ x, y, atol=1e-10)
    assert_allclose(x, a.T @ np.linalg.solve(a @ a.T, y), atol=1e-10)


def test_baseline_ridge__stationary(rng: np.random.Generator) -> None:
    a, y = rng.standard_normal((6, 9)), rng.standard_normal(6)
    x = baseline_ridge(a, y, 0.3)
    assert_allclose(a.T @ (a @ x - y) + 0.3 * x, 0.0, atol=1e-10)


@pytest.mark.parametrize("lam", [0.0, -1.0])
def test_baseline_ridge__invalid_weight(lam: float) -> None:
    with pytest.raises(InputError):
        baseline_ridge(np.eye(2), np.ones(2), lam)


def test_baseline_huber__quadratic_regime_is_ridge(rng: np.random.Generator) -> None:
    # residuals below gamma are penalized by r^2 / (2 gamma)
    a, y = rng.standard_normal((10, 4)), rng.standard_normal(10)
    gamma, lam = 1e3, 1e-3
    result = baseline_huber(a, y, gamma, lam, TIGHT)
    assert result.converged
    assert_allclose(result.x, baseline_ridge(a, y, gamma * lam), atol=1e-6)


def test_baseline_huber__resists_outlier() -> None:
    a = np.ones((5, 1))
    y = np.array([1.0, 1.0, 1.0, 1.0, 100.0])
    huber = baseline_huber(a, y, gamma=0.1, lam=1e-6, config=TIGHT).x
    assert abs(huber[0] - 1.0) < abs(baseline_ols(a, y)[0] - 1.0)
    assert huber_objective(a, y, 0.1, 1e-6, huber) <= huber_objective(
        a, y, 0.1, 1e-6, baseline_ols(a, y)
    )


def test_baseline_huber__trace() -> None:
    result = baseline_huber(np.eye(2), [1.0, -1.0], 1.0, 0.5, SolverConfig(max_iter=20))
    assert len(result.objective_trace) == result.iterations
    assert np.all(np.diff(result.objective_trace) <= 1e-12)


def test_baseline_lad_ridge__1d() -> None:
    # |x - 3| + x^2 / 2 is minimized at x = 1
    result = baseline_lad_ridge([[1.0]], [3.0], 1.0, TIGHT)
    assert_allclose(result.x, [1.0], atol=1e-6)


def test_baseline_lad_ridge__optimal_against_perturbations(rng: np.random.Generator) -> None:
    a, y, lam = rng.standard_normal((8, 3)), rng.standard_normal(8), 0.5

    def objective(x: np.ndarray) -> float:
        return float(np.sum(np.abs(a @ x - y)) + 0.5 * lam * x @ x)

    x = baseline_lad_ridge(a, y, lam, TIGHT).x
    for _ in range(50):
        assert objective(x) <= objective(x + 1e-2 * rng.standard_normal(3)) + 1e-6
