"""This module implements the optimality certificate of a candidate solution."""

import numpy as np
import numpy.typing as npt

from limes_toolkit.errors import InputError
from limes_toolkit.model.problem import LimesProblem
from limes_toolkit.solvers.config import SolverConfig
from limes_toolkit.solvers.primal_dual import primal_dual_map
from limes_toolkit.solvers.prox_gradient import prox_gradient_map
from limes_toolkit.solvers.steps import primal_dual_steps


def fixed_point_residual(
    problem: LimesProblem, x: npt.ArrayLike, v: npt.ArrayLike | None = None
) -> float:
    """
    The distance between a point and its image under one solver iteration, which is zero
    exactly at the fixed points (the minimizers, under convexity).

    With A2 = I . + c2 this is ||x - Prox_{beta mu Psi(. + c2)}(x - beta grad F(x))|| with
    beta = 1 / L_F. Otherwise it is the norm of the change of (x, v) under one primal-dual
    iteration with automatic steps.

    :param problem: The problem.
    :param x: The primal point.
    :param v: The dual point, required when A2 is not of the form I . + c2.
    :raises InputError: If `v` is missing but required.
    """
    point = np.asarray(x, dtype=np.float64).reshape(-1)
    if problem.a2.is_identity:
        beta = 1.0 / problem.lipschitz_constant
        return float(np.linalg.norm(point - prox_gradient_map(problem, point, beta)))
    if v is None:
        raise InputError("The dual point v is needed when A2 is not the identity.")
    dual = np.asarray(v, dtype=np.float64).reshape(-1)
    tau, sigma = primal_dual_steps(problem, SolverConfig())
    x_next, v_next = primal_dual_map(problem, point, dual, tau, sigma)
    return float(np.hypot(np.linalg.norm(x_next - point), np.linalg.norm(v_next - dual)))
