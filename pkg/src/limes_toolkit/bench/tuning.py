"""
This module tunes a regularization parameter so that the estimate reaches a target
sparseness, as used to compare sparse estimators at equal sparsity.
"""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
import numpy.typing as npt

from limes_toolkit.bench.constants import (
    BRACKET_EXPANSIONS,
    FALLBACK_GRID_SIZE,
    MAX_BISECTION_STEPS,
    SPARSENESS_TOL,
    TUNING_BRACKET_LOW_FACTOR,
)
from limes_toolkit.bench.metrics import hoyer_sparseness
from limes_toolkit.errors import InputError, TuningError
from limes_toolkit.solvers.config import SolveResult

LOG = logging.getLogger(__name__)

Solver = Callable[[float], SolveResult]
"""Solves the problem for a given regularization parameter mu."""


@dataclass(frozen=True, eq=False)
class TuningOutcome:
    """The parameter found by the tuning and the solve it produced."""

    mu: float
    result: SolveResult
    sparseness: float
    evaluations: int
    """The number of solves run up to and including this one."""


def lasso_bracket(a: npt.ArrayLike, y: npt.ArrayLike) -> tuple[float, float]:
    """
    The bracket [1e-4 ||A^T y||_inf, ||A^T y||_inf]; at the upper end the lasso solution
    is zero.
    """
    upper = float(np.max(np.abs(np.asarray(a).T @ np.asarray(y))))
    if upper == 0.0:
        raise InputError("A^T y is zero; there is nothing to tune.")
    return TUNING_BRACKET_LOW_FACTOR * upper, upper


def tune_mu_to_sparseness(
    solve: Solver,
    target: float,
    bracket: tuple[float, float],
    tol: float = SPARSENESS_TOL,
) -> TuningOutcome:
    """
    Finds mu such that the Hoyer sparseness of `solve(mu).x` is within `tol` of `target`.

    Sparseness grows with mu, so the search bisects log(mu) on the bracket, after raising its
    upper end by factors of 10 if needed. If bisection does not reach the tolerance (the map
    need not be monotone) the closest point of a log-spaced grid over the bracket is used.

    :param solve: The solver, as a function of mu.
    :param target: The target sparseness, in [0, 1].
    :param bracket: The initial (low, high) values of mu.
    :param tol: The accepted sparseness error.
    :raises InputError: If the target is outside [0, 1] or the bracket is invalid.
    :raises TuningError: If the target is below the sparseness at the low end of the bracket,
        or above the sparseness reachable by raising the high end.
    """
    if not 0.0 <= target <= 1.0:
        raise InputError(f"The target sparseness must lie in [0, 1], got {target}.")
    low, high = bracket
    if not 0 < low < high:
        raise InputError(f"Invalid bracket {bracket}.")
    outcomes: list[TuningOutcome] = []

    def evaluate(mu: float) -> TuningOutcome:
        result = solve(mu)
        outcome = TuningOutcome(mu, result, hoyer_sparseness(result.x), len(outcomes) + 1)
        outcomes.append(outcome)
        return outcome

    low_outcome = evaluate(low)
    if low_outcome.sparseness > target + tol:
        raise TuningError(
            f"Target sparseness {target:.4f} is below {low_outcome.sparseness:.4f}, reached at "
            f"the lowest mu {low:.3e}."
        )
    if abs(low_outcome.sparseness - target) <= tol:
        return low_outcome
    high_outcome = evaluate(high)
    expansions = 0
    while high_outcome.sparseness < target - tol and expansions < BRACKET_EXPANSIONS:
        low, high = high, 10.0 * high
        high_outcome = evaluate(high)
        expansions += 1
    if high_outcome.sparseness < target - tol:
        raise TuningError(f"Target sparseness {target:.4f} not reached up to mu={high:.3e}.")
    if abs(high_outcome.sparseness - target) <= tol:
        return high_outcome
    top = high

    for _ in range(MAX_BISECTION_STEPS):
        mid = float(np.sqrt(low * high))
        outcome = evaluate(mid)
        if abs(outcome.sparseness - target) <= tol:
            return outcome
        if outcome.sparseness < target:
            low = mid
        else:
            high = mid

    LOG.warning(
        "Bisection did not reach sparseness %.4f within %.3f; falling back to a grid.",
        target,
        tol,
    )
    for mu in np.geomspace(bracket[0], top, FALLBACK_GRID_SIZE):
        evaluate(float(mu))
    return min(outcomes, key=lambda outcome: abs(outcome.sparseness - target))
