"""
This module resolves the step sizes of the solvers from the spectral bounds of a problem
and implements the stopping rule they share.
"""

import numpy as np

from limes_toolkit.errors import ConfigError, NumericalError
from limes_toolkit.linop.spectral import lambda_max_gram
from limes_toolkit.model.problem import LimesProblem
from limes_toolkit.solvers.config import AUTO, SolverConfig
from limes_toolkit.types import FloatArray


def prox_gradient_step(problem: LimesProblem, config: SolverConfig) -> float:
    """
    The step beta of the proximal gradient method, in (0, 2 / L_F) where L_F bounds the
    Lipschitz constant of the smooth gradient.

    :raises ConfigError: If a user step is outside the admissible interval.
    """
    upper = 2.0 / problem.lipschitz_constant
    if config.step_beta == AUTO:
        return config.step_fraction * upper
    if not config.step_beta < upper:
        raise ConfigError(f"step_beta={config.step_beta} must be below 2 / L_F = {upper:.6e}.")
    return float(config.step_beta)


def primal_dual_steps(problem: LimesProblem, config: SolverConfig) -> tuple[float, float]:
    """
    The steps (tau, sigma) of the primal-dual method, with tau < 2 / L_F and
    tau * sigma * ||M2||^2 < 1.

    :raises ConfigError: If a user step violates one of the two conditions.
    """
    upper = 2.0 / problem.lipschitz_constant
    if config.tau == AUTO:
        tau = config.step_fraction * upper
    elif config.tau < upper:
        tau = float(config.tau)
    else:
        raise ConfigError(f"tau={config.tau} must be below 2 / L_F = {upper:.6e}.")
    m2_norm_sq = lambda_max_gram(problem.a2.matrix)
    if config.sigma == AUTO:
        sigma = config.step_fraction / (tau * m2_norm_sq)
    elif config.sigma * tau * m2_norm_sq < 1.0:
        sigma = float(config.sigma)
    else:
        raise ConfigError(
            f"tau * sigma * ||M2||^2 = {config.sigma * tau * m2_norm_sq:.6e} must be below 1."
        )
    return tau, sigma


def relative_change(previous: FloatArray, current: FloatArray) -> float:
    """||current - previous|| / max(1, ||previous||)."""
    return float(np.linalg.norm(current - previous) / max(1.0, np.linalg.norm(previous)))


def check_finite(x: FloatArray, iteration: int) -> None:
    if not np.all(np.isfinite(x)):
        raise NumericalError(f"Non-finite iterate at iteration {iteration}.")
