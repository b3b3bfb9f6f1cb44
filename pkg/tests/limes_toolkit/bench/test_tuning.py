"""
This module contains the tests of the sparseness tuning.
"""

import numpy as np
import pytest

from limes_toolkit.bench.constants import SPARSENESS_TOL
from limes_toolkit.bench.metrics import hoyer_sparseness
from limes_toolkit.bench.tuning import Solver, lasso_bracket, tune_mu_to_sparseness
from limes_toolkit.errors import InputError, TuningError
from limes_toolkit.solvers.config import SolverConfig, SolveResult
from limes_toolkit.solvers.ista import ista


def _constant_solver(x: list[float]) -> Solver:
    def solve(mu: float) -> SolveResult:
        return SolveResult(
            x=np.array(x),
            v=None,
            objective_trace=[],
            residual_trace=[],
            iterations=1,
            converged=True,
        )

    return solve


def _shrinking_solver(mu: float) -> SolveResult:
    # sparseness grows continuously with mu
    t = 1.0 / (1.0 + mu)
    return _constant_solver([1.0, t, t, t])(mu)


def test_tune_mu_to_sparseness__expands_and_bisects() -> None:
    outcome = tune_mu_to_sparseness(_shrinking_solver, 0.5, (1e-3, 1.0))
    assert abs(outcome.sparseness - 0.5) <= SPARSENESS_TOL
    assert outcome.mu > 1.0
    assert outcome.evaluations > 3
    assert np.isclose(outcome.sparseness, hoyer_sparseness(outcome.result.x))


def test_tune_mu_to_sparseness__lasso(rng: np.random.Generator) -> None:
    a = rng.standard_normal((20, 40))
    x_true = np.zeros(40)
    x_true[:4] = rng.standard_normal(4)
    y = a @ x_true
    config = SolverConfig(max_iter=2000, rel_tol=1e-10, record_trace=False)
    outcome = tune_mu_to_sparseness(
        lambda mu: ista(a, y, mu, config), 0.8, lasso_bracket(a, y)
    )
    assert abs(outcome.sparseness - 0.8) <= SPARSENESS_TOL


def test_tune_mu_to_sparseness__target_below_reach() -> None:
    with pytest.raises(TuningError):
        tune_mu_to_sparseness(_constant_solver([0.0, 0.0, 1.0]), 0.5, (0.1, 1.0))


def test_tune_mu_to_sparseness__target_above_reach() -> None:
    with pytest.raises(TuningError):
        tune_mu_to_sparseness(_constant_solver([1.0, 1.0, 1.0]), 0.5, (0.1, 1.0))


@pytest.mark.parametrize("target,bracket", [(1.5, (0.1, 1.0)), (0.5, (1.0, 0.1)), (0.5, (0, 1))])
def test_tune_mu_to_sparseness__invalid(target: float, bracket: tuple[float, float]) -> None:
    with pytest.raises(InputError):
        tune_mu_to_sparseness(_shrinking_solver, target, bracket)


def test_lasso_bracket() -> None:
    low, high = lasso_bracket([[1.0, 0.0], [0.0, 2.0]], [3.0, -1.0])
    assert high == 3.0
    assert np.isclose(low, 3e-4)
    with pytest.raises(InputError):
        lasso_bracket([[1.0, 0.0]], [0.0])
