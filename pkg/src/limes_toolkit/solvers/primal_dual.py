"""
This module implements the primal-dual debiasing method, a forward-backward primal-dual
splitting of the smooth part F and of the shifted seed z -> mu Psi(z + c2) composed with M2:

    s_k = x_k - tau grad F(x_k)
    u_k = s_k - tau M2^T v_k
    q_k = Prox_{sigma (mu Psi(. + c2))^*}(v_k + sigma M2 u_k)
    p_k = s_k - tau M2^T q_k
    (x_{k+1}, v_{k+1}) = (x_k, v_k) + beta ((p_k, q_k) - (x_k, v_k))
"""

import logging

import numpy as np
import numpy.typing as npt

from limes_toolkit.errors import ConvexityError, InputError
from limes_toolkit.model.convexity import check_convexity
from limes_toolkit.model.problem import LimesProblem, objective_eval, smooth_gradient
from limes_toolkit.proximal.envelope import shifted_conjugate_prox
from limes_toolkit.solvers.config import SolverConfig, SolveResult
from limes_toolkit.solvers.steps import check_finite, primal_dual_steps, relative_change
from limes_toolkit.types import FloatArray

LOG = logging.getLogger(__name__)


def primal_dual_map(
    problem: LimesProblem,
    x: FloatArray,
    v: FloatArray,
    tau: float,
    sigma: float,
    relaxation: float = 1.0,
) -> tuple[FloatArray, FloatArray]:
    """One iteration of the primal-dual method from (x, v)."""
    m2 = problem.a2.matrix
    s = x - tau * smooth_gradient(problem, x)
    u = s - tau * (m2.T @ v)
    q = shifted_conjugate_prox(
        problem.seed, problem.mu, problem.a2.offset, v + sigma * (m2 @ u), sigma
    )
    p = s - tau * (m2.T @ q)
    return x + relaxation * (p - x), v + relaxation * (q - v)


def _initial(value: npt.ArrayLike | None, dim: int, name: str) -> FloatArray:
    point = np.zeros(dim) if value is None else np.array(value, dtype=np.float64).reshape(-1)
    if point.shape[0] != dim:
        raise InputError(f"{name} has size {point.shape[0]}, expected {dim}.")
    return point


def primal_dual_debiasing(
    problem: LimesProblem,
    config: SolverConfig | None = None,
    x0: npt.ArrayLike | None = None,
    v0: npt.ArrayLike | None = None,
) -> SolveResult:
    """
    Minimizes the objective of `problem` by the primal-dual method. Any A2 is supported.

    :param problem: The problem.
    :param config: Iteration controls; defaults to `SolverConfig()`.
    :param x0: The initial primal point; defaults to 0.
    :param v0: The initial dual point; defaults to 0.
    :raises ConvexityError: If the smooth part is not convex and the override is off.
    :raises ConfigError: If (tau, sigma) violate the step conditions.
    """
    config = config or SolverConfig()
    report = check_convexity(problem, config.allow_nonconvex)
    if not report.satisfied and not config.allow_nonconvex:
        raise ConvexityError(report)
    tau, sigma = primal_dual_steps(problem, config)
    x = _initial(x0, problem.x_dim, "x0")
    v = _initial(v0, problem.z_dim, "v0")
    LOG.info(
        "Primal-dual: tau=%.6e, sigma=%.6e, relaxation=%.3f, max_iter=%d.",
        tau,
        sigma,
        config.relaxation,
        config.max_iter,
    )

    objective_trace: list[float] = []
    residual_trace: list[float] = []
    converged = False
    iteration = 0
    for iteration in range(1, config.max_iter + 1):
        x_next, v_next = primal_dual_map(problem, x, v, tau, sigma, config.relaxation)
        check_finite(x_next, iteration)
        check_finite(v_next, iteration)
        change = max(relative_change(x, x_next), relative_change(v, v_next))
        x, v = x_next, v_next
        if config.record_trace:
            objective_trace.append(objective_eval(problem, x))
            residual_trace.append(change)
        if change <= config.rel_tol:
            converged = True
            break

    LOG.info("Primal-dual stopped after %d iterations (converged=%s).", iteration, converged)
    return SolveResult(
        x=x,
        v=v,
        objective_trace=objective_trace,
        residual_trace=residual_trace,
        iterations=iteration,
        converged=converged,
        global_guarantee=report.satisfied,
        steps={"tau": tau, "sigma": sigma, "relaxation": config.relaxation},
        convexity_margin=report.margin,
    )
