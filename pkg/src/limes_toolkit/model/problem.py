"""
This module defines the LiMES problem type and the exact evaluation of its penalty,
objective and smooth gradient.

A problem minimizes

    J(x) = 0.5 ||A1 x||^2 + mu * Psi_D^L(A2 x),
    Psi_D^L(z) = Psi(z) - min_v [Psi(v) + 0.5 ||D (L z - v)||^2],

which splits into the smooth part F(x) = 0.5 ||A1 x||^2 - mu * min_v [...] and the
nonsmooth part mu * Psi(A2 x).
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np
import numpy.typing as npt

from limes_toolkit.constants import Application
from limes_toolkit.errors import InputError
from limes_toolkit.linop.operators import AffineOperator, BlockScalarDiagonal, as_matrix
from limes_toolkit.linop.spectral import lambda_max_gram
from limes_toolkit.proximal.envelope import enhancement_minimizer, enhancement_value
from limes_toolkit.proximal.seeds import ProximableSeed, as_point
from limes_toolkit.types import FloatArray


@dataclass(frozen=True, eq=False)
class LimesProblem:
    """
    The tuple (A1, A2, L, D, Psi, mu) defining a LiMES objective.
    """

    a1: AffineOperator
    """The data-fidelity operator A1 = M1 . + c1, from X to Y."""

    a2: AffineOperator
    """The operator A2 = M2 . + c2 feeding the penalty, from X to Z."""

    l_matrix: FloatArray
    """The linear operator L on Z selecting the subspace the penalty is enhanced over."""

    d: BlockScalarDiagonal
    """The block-scalar scaling D on Z (gamma^{-1/2} I in most applications)."""

    seed: ProximableSeed
    """The seed function Psi on Z."""

    mu: float
    """The regularization parameter."""

    application: Application = Application.GENERIC
    """The family the problem was built for; selects the closed-form convexity bound."""

    debias: bool = True
    """If False the Moreau-enhancement term is dropped and the penalty is Psi itself."""

    parameters: Mapping[str, float] = field(default_factory=dict)
    """The scalar construction parameters (gamma, sigma_x, ...), kept for reports."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "l_matrix", as_matrix(self.l_matrix, "L"))
        object.__setattr__(self, "parameters", dict(self.parameters))
        if not self.mu > 0:
            raise InputError(f"mu must be strictly positive, got {self.mu}.")
        if self.a1.is_zero:
            raise InputError("M1 must not be the zero operator.")
        if self.a2.is_zero:
            raise InputError("M2 must not be the zero operator.")
        if not np.any(self.l_matrix):
            raise InputError("L must not be the zero operator.")
        z_dim = self.a2.out_dim
        if self.a1.in_dim != self.a2.in_dim:
            raise InputError(
                f"A1 acts on dimension {self.a1.in_dim} but A2 on dimension {self.a2.in_dim}."
            )
        if self.l_matrix.shape != (z_dim, z_dim):
            raise InputError(f"L must be {z_dim} x {z_dim}, got {self.l_matrix.shape}.")
        if self.d.dim != z_dim:
            raise InputError(f"D has dimension {self.d.dim}, expected {z_dim}.")
        if self.seed.dim != z_dim:
            raise InputError(f"The seed has dimension {self.seed.dim}, expected {z_dim}.")

    @property
    def x_dim(self) -> int:
        return self.a1.in_dim

    @property
    def z_dim(self) -> int:
        return self.a2.out_dim

    @property
    def gamma(self) -> float | None:
        return self.parameters.get("gamma")

    @cached_property
    def enhanced_m2(self) -> FloatArray:
        """The matrix L M2."""
        return self.l_matrix @ self.a2.matrix

    @cached_property
    def lipschitz_constant(self) -> float:
        """
        An upper bound of the Lipschitz constant of the smooth gradient:
        ||M1||^2 + mu * max(D)^2 * ||L M2||^2.
        """
        bound = lambda_max_gram(self.a1.matrix)
        if self.debias and np.any(self.enhanced_m2):
            bound += self.mu * self.d.max_scale**2 * lambda_max_gram(self.enhanced_m2)
        return bound

    @cached_property
    def enhancement_offset(self) -> float:
        """The constant min_v [Psi(v) + 0.5 ||D v||^2], the enhancement at L z = 0."""
        return enhancement_value(self.seed, self.d, np.zeros(self.z_dim))


def _as_x(problem: LimesProblem, x: npt.ArrayLike) -> FloatArray:
    point = np.asarray(x, dtype=np.float64).reshape(-1)
    if point.shape[0] != problem.x_dim:
        raise InputError(f"Expected a point of size {problem.x_dim}, got {point.shape[0]}.")
    return point


def limes_penalty_eval(problem: LimesProblem, z: npt.ArrayLike) -> float:
    """
    Evaluates the LiMES function Psi_D^L at a point of Z.

    The inner minimum is attained at `enhancement_minimizer`, so the value is exact. On the
    kernel of L it is the cached `enhancement_offset`.

    :param problem: The problem carrying (L, D, Psi).
    :param z: A point of Z.
    :return: Psi(z) - min_v [Psi(v) + 0.5 ||D (L z - v)||^2].
    """
    point = as_point(problem.seed, z)
    value = problem.seed.evaluate(point)
    if not problem.debias:
        return value
    lifted = problem.l_matrix @ point
    if not np.any(lifted):
        return value - problem.enhancement_offset
    return value - enhancement_value(problem.seed, problem.d, lifted)


def objective_eval(problem: LimesProblem, x: npt.ArrayLike) -> float:
    """The objective 0.5 ||A1 x||^2 + mu * Psi_D^L(A2 x)."""
    point = _as_x(problem, x)
    residual = problem.a1.apply(point)
    return 0.5 * float(residual @ residual) + problem.mu * limes_penalty_eval(
        problem, problem.a2.apply(point)
    )


def smooth_eval(problem: LimesProblem, x: npt.ArrayLike) -> float:
    """The smooth part F(x) = 0.5 ||A1 x||^2 - mu * min_v [Psi(v) + 0.5 ||D (L A2 x - v)||^2]."""
    point = _as_x(problem, x)
    residual = problem.a1.apply(point)
    value = 0.5 * float(residual @ residual)
    if problem.debias:
        lifted = problem.l_matrix @ problem.a2.apply(point)
        value -= problem.mu * enhancement_value(problem.seed, problem.d, lifted)
    return value


def smooth_gradient(problem: LimesProblem, x: npt.ArrayLike) -> FloatArray:
    """
    The gradient of the smooth part,

        M1^T (A1 x) - mu * M2^T L^T D^2 (L A2 x - v*),

    where v* is the minimizer of the Moreau enhancement at L A2 x.

    :param problem: The problem.
    :param x: A point of X.
    :return: A point of X.
    """
    point = _as_x(problem, x)
    gradient = problem.a1.adjoint_apply(problem.a1.apply(point))
    if not problem.debias:
        return gradient
    lifted = problem.l_matrix @ problem.a2.apply(point)
    minimizer = enhancement_minimizer(problem.seed, problem.d, lifted)
    scaled = problem.d.diagonal() ** 2 * (lifted - minimizer)
    return gradient - problem.mu * problem.a2.adjoint_apply(problem.l_matrix.T @ scaled)


def normalized_pmc_eval(problem: LimesProblem, x: npt.ArrayLike, gamma: float) -> float:
    """
    The PMC penalty rescaled by theta = 2 / gamma for gamma < 2 (1 otherwise), which moves
    between the l0 pseudo-norm (gamma -> 0) and the l1 norm (gamma -> infinity).

    :param problem: A PMC-shaped problem built with the same `gamma`.
    :param x: A point of X = Z.
    :param gamma: The envelope index of the problem.
    :raises InputError: If gamma <= 0 or A2 is not the identity.
    """
    if not gamma > 0:
        raise InputError(f"gamma must be strictly positive, got {gamma}.")
    if not problem.a2.is_identity:
        raise InputError("The normalized PMC penalty needs A2 to be the identity.")
    theta = 2.0 / gamma if gamma < 2.0 else 1.0
    return theta * limes_penalty_eval(problem, _as_x(problem, x))
