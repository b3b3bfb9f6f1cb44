"""
This module implements the reference estimators the LiMES methods are compared with:
ordinary least squares, ridge regression, Huber regression and LAD-ridge regression.
"""

import logging

import numpy as np
import numpy.typing as npt
import scipy.linalg

from limes_toolkit.errors import InputError
from limes_toolkit.linop.operators import AffineOperator, BlockScalarDiagonal, as_matrix, as_vector
from limes_toolkit.linop.spectral import lambda_max_gram
from limes_toolkit.model.problem import LimesProblem
from limes_toolkit.proximal.envelope import moreau_envelope, moreau_gradient
from limes_toolkit.proximal.seeds import L1Norm
from limes_toolkit.solvers.config import SolverConfig, SolveResult
from limes_toolkit.solvers.primal_dual import primal_dual_debiasing
from limes_toolkit.solvers.steps import check_finite, relative_change
from limes_toolkit.types import FloatArray

LOG = logging.getLogger(__name__)


def _system(a: npt.ArrayLike, y: npt.ArrayLike) -> tuple[FloatArray, FloatArray]:
    a = as_matrix(a, "A")
    y = as_vector(y, "y")
    if y.shape[0] != a.shape[0]:
        raise InputError(f"y has length {y.shape[0]} but A has {a.shape[0]} rows.")
    return a, y


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not value > 0:
            raise InputError(f"{name} must be strictly positive, got {value}.")


def baseline_ols(a: npt.ArrayLike, y: npt.ArrayLike) -> FloatArray:
    """The minimum-norm least-squares solution pinv(A) y."""
    a, y = _system(a, y)
    return scipy.linalg.pinv(a) @ y


def baseline_ridge(a: npt.ArrayLike, y: npt.ArrayLike, lam: float) -> FloatArray:
    """The ridge solution (A^T A + lam I)^{-1} A^T y."""
    _require_positive(lam=lam)
    a, y = _system(a, y)
    return scipy.linalg.solve(a.T @ a + lam * np.eye(a.shape[1]), a.T @ y, assume_a="pos")


def huber_objective(a: FloatArray, y: FloatArray, gamma: float, lam: float, x: FloatArray) -> float:
    """The Huber loss (the Moreau envelope of the l1 norm) of A x - y plus lam / 2 ||x||^2."""
    residual = a @ x - y
    return moreau_envelope(L1Norm(residual.shape[0]), residual, gamma) + 0.5 * lam * float(x @ x)


def baseline_huber(
    a: npt.ArrayLike,
    y: npt.ArrayLike,
    gamma: float,
    lam: float,
    config: SolverConfig | None = None,
    x0: npt.ArrayLike | None = None,
) -> SolveResult:
    """
    Minimizes the Huber loss of A x - y plus lam / 2 ||x||^2 by gradient descent with the
    step 1 / (lambda_max(A^T A) / gamma + lam).

    :param a: The m x n system matrix.
    :param y: The m observations.
    :param gamma: The index of the envelope; residuals below it are penalized quadratically.
    :param lam: The Tikhonov weight.
    :param config: Iteration controls; only `max_iter`, `rel_tol` and `record_trace` are used.
    :param x0: The initial point; defaults to 0.
    """
    config = config or SolverConfig()
    _require_positive(gamma=gamma, lam=lam)
    a, y = _system(a, y)
    seed = L1Norm(a.shape[0])
    step = 1.0 / (lambda_max_gram(a) / gamma + lam)
    x = np.zeros(a.shape[1]) if x0 is None else as_vector(x0, "x0").copy()

    objective_trace: list[float] = []
    residual_trace: list[float] = []
    converged = False
    iteration = 0
    for iteration in range(1, config.max_iter + 1):
        gradient = a.T @ moreau_gradient(seed, a @ x - y, gamma) + lam * x
        x_next = x - step * gradient
        check_finite(x_next, iteration)
        change = relative_change(x, x_next)
        x = x_next
        if config.record_trace:
            objective_trace.append(huber_objective(a, y, gamma, lam, x))
            residual_trace.append(change)
        if change <= config.rel_tol:
            converged = True
            break

    LOG.debug("Huber regression stopped after %d iterations.", iteration)
    return SolveResult(
        x=x,
        v=None,
        objective_trace=objective_trace,
        residual_trace=residual_trace,
        iterations=iteration,
        converged=converged,
        steps={"step": step},
    )


def make_lad_ridge(a: npt.ArrayLike, y: npt.ArrayLike, lam: float) -> LimesProblem:
    """
    LAD-ridge regression ||A x - y||_1 + lam / 2 ||x||^2 as a problem without Moreau
    enhancement: A1 = sqrt(lam) I, A2 = A . - y, Psi = l1, mu = 1.
    """
    _require_positive(lam=lam)
    a, y = _system(a, y)
    m, n = a.shape
    return LimesProblem(
        a1=AffineOperator.linear(np.sqrt(lam) * np.eye(n)),
        a2=AffineOperator(matrix=a, offset=-y),
        l_matrix=np.eye(m),
        d=BlockScalarDiagonal.scalar(m, 1.0),
        seed=L1Norm(m),
        mu=1.0,
        debias=False,
        parameters={"lambda": lam},
    )


def baseline_lad_ridge(
    a: npt.ArrayLike,
    y: npt.ArrayLike,
    lam: float,
    config: SolverConfig | None = None,
    x0: npt.ArrayLike | None = None,
    v0: npt.ArrayLike | None = None,
) -> SolveResult:
    """Minimizes ||A x - y||_1 + lam / 2 ||x||^2 by the primal-dual method."""
    return primal_dual_debiasing(make_lad_ridge(a, y, lam), config, x0, v0)
