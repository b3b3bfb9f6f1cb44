"""
This module implements the proximal debiasing gradient method for problems whose penalty
acts directly on the variable (A2 = I . + c2):

    x_{k+1} = Prox_{beta mu Psi(. + c2)}(x_k - beta grad F(x_k)).

Applied to the PMC problem it is the iterative shrinkage and debiasing algorithm.
"""

import logging

import numpy as np
import numpy.typing as npt

from limes_toolkit.errors import ConvexityError, InputError
from limes_toolkit.model.convexity import check_convexity
from limes_toolkit.model.problem import LimesProblem, objective_eval, smooth_gradient
from limes_toolkit.solvers.config import SolverConfig, SolveResult
from limes_toolkit.solvers.steps import check_finite, prox_gradient_step, relative_change
from limes_toolkit.types import FloatArray

LOG = logging.getLogger(__name__)


def prox_gradient_map(problem: LimesProblem, x: FloatArray, beta: float) -> FloatArray:
    """One proximal gradient step from `x` with step `beta`."""
    offset = problem.a2.offset
    forward = x - beta * smooth_gradient(problem, x)
    return problem.seed.prox(forward + offset, beta * problem.mu) - offset


def proximal_debiasing_gradient(
    problem: LimesProblem,
    config: SolverConfig | None = None,
    x0: npt.ArrayLike | None = None,
) -> SolveResult:
    """
    Minimizes the objective of `problem` by the proximal gradient method.

    :param problem: A problem whose A2 has the identity as linear part.
    :param config: Iteration controls; defaults to `SolverConfig()`.
    :param x0: The initial point; defaults to 0.
    :raises InputError: If A2 is not of the form I . + c2.
    :raises ConvexityError: If the smooth part is not convex and the override is off.
    :raises ConfigError: If the step is outside (0, 2 / L_F).
    """
    config = config or SolverConfig()
    if not problem.a2.is_identity:
        raise InputError(
            "The proximal gradient method needs A2 = I; use the primal-dual method instead."
        )
    report = check_convexity(problem, config.allow_nonconvex)
    if not report.satisfied and not config.allow_nonconvex:
        raise ConvexityError(report)
    beta = prox_gradient_step(problem, config)
    x = np.zeros(problem.x_dim) if x0 is None else np.array(x0, dtype=np.float64).reshape(-1)
    if x.shape[0] != problem.x_dim:
        raise InputError(f"x0 has size {x.shape[0]}, expected {problem.x_dim}.")
    LOG.info("Proximal gradient: beta=%.6e, max_iter=%d.", beta, config.max_iter)

    objective_trace: list[float] = []
    residual_trace: list[float] = []
    converged = False
    iteration = 0
    for iteration in range(1, config.max_iter + 1):
        x_next = prox_gradient_map(problem, x, beta)
        check_finite(x_next, iteration)
        change = relative_change(x, x_next)
        x = x_next
        if config.record_trace:
            objective_trace.append(objective_eval(problem, x))
            residual_trace.append(change)
        if change <= config.rel_tol:
            converged = True
            break

    LOG.info("Proximal gradient stopped after %d iterations (converged=%s).", iteration, converged)
    return SolveResult(
        x=x,
        v=None,
        objective_trace=objective_trace,
        residual_trace=residual_trace,
        iterations=iteration,
        converged=converged,
        global_guarantee=report.satisfied,
        steps={"beta": beta},
        convexity_margin=report.margin,
    )
