"""
This module implements the iterative shrinkage-thresholding algorithm for the lasso,
0.5 ||A x - y||^2 + mu ||x||_1, with the constant step 1 / lambda_max(A^T A).
"""

import logging

import numpy as np
import numpy.typing as npt

from limes_toolkit.errors import InputError
from limes_toolkit.linop.operators import as_matrix, as_vector
from limes_toolkit.linop.spectral import lambda_max_gram
from limes_toolkit.proximal.seeds import soft_threshold
from limes_toolkit.solvers.config import SolverConfig, SolveResult
from limes_toolkit.solvers.steps import check_finite, relative_change
from limes_toolkit.types import FloatArray

LOG = logging.getLogger(__name__)


def lasso_objective(a: FloatArray, y: FloatArray, mu: float, x: FloatArray) -> float:
    residual = a @ x - y
    return 0.5 * float(residual @ residual) + mu * float(np.sum(np.abs(x)))


def ista(
    a: npt.ArrayLike,
    y: npt.ArrayLike,
    mu: float,
    config: SolverConfig | None = None,
    x0: npt.ArrayLike | None = None,
) -> SolveResult:
    """
    Solves the lasso by ISTA.

    :param a: The m x n system matrix.
    :param y: The m observations.
    :param mu: The l1 weight, strictly positive.
    :param config: Iteration controls; only `max_iter`, `rel_tol` and `record_trace` are used.
    :param x0: The initial point; defaults to 0.
    """
    config = config or SolverConfig()
    if not mu > 0:
        raise InputError(f"mu must be strictly positive, got {mu}.")
    a = as_matrix(a, "A")
    y = as_vector(y, "y")
    if y.shape[0] != a.shape[0]:
        raise InputError(f"y has length {y.shape[0]} but A has {a.shape[0]} rows.")
    step = 1.0 / lambda_max_gram(a)
    x = np.zeros(a.shape[1]) if x0 is None else np.array(x0, dtype=np.float64).reshape(-1)
    if x.shape[0] != a.shape[1]:
        raise InputError(f"x0 has size {x.shape[0]}, expected {a.shape[1]}.")
    correlation = a.T @ y
    gram = a.T @ a
    LOG.debug("ISTA: step=%.6e, mu=%.6e.", step, mu)

    objective_trace: list[float] = []
    residual_trace: list[float] = []
    converged = False
    iteration = 0
    for iteration in range(1, config.max_iter + 1):
        x_next = soft_threshold(x - step * (gram @ x - correlation), step * mu)
        check_finite(x_next, iteration)
        change = relative_change(x, x_next)
        x = x_next
        if config.record_trace:
            objective_trace.append(lasso_objective(a, y, mu, x))
            residual_trace.append(change)
        if change <= config.rel_tol:
            converged = True
            break

    LOG.debug("ISTA stopped after %d iterations (converged=%s).", iteration, converged)
    return SolveResult(
        x=x,
        v=None,
        objective_trace=objective_trace,
        residual_trace=residual_trace,
        iterations=iteration,
        converged=converged,
        steps={"step": step},
    )
