"""
This module implements the constructors of the LiMES problem families: debiased sparse
modeling (PMC, and plain MC), stable and plain outlier-robust regression, stable principal
component pursuit, classification with the Moreau-enhanced hinge loss, MC-TV denoising and
Moreau-enhanced nuclear-norm denoising.
"""

import numpy as np
import numpy.typing as npt

from limes_toolkit.constants import Application
from limes_toolkit.errors import InputError
from limes_toolkit.linop.operators import (
    AffineOperator,
    BlockScalarDiagonal,
    as_matrix,
    as_vector,
    first_difference,
)
from limes_toolkit.linop.spectral import projector_range_adjoint
from limes_toolkit.model.problem import LimesProblem
from limes_toolkit.proximal.seeds import BlockSum, BoxSupport, L1Norm, NuclearNorm


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not value > 0:
            raise InputError(f"{name} must be strictly positive, got {value}.")


def _envelope_scaling(dim: int, gamma: float) -> BlockScalarDiagonal:
    return BlockScalarDiagonal.scalar(dim, gamma**-0.5)


def _system(a: npt.ArrayLike, y: npt.ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    a = as_matrix(a, "A")
    y = as_vector(y, "y")
    if y.shape[0] != a.shape[0]:
        raise InputError(f"y has length {y.shape[0]} but A has {a.shape[0]} rows.")
    if not np.any(a):
        raise InputError("A must not be the zero matrix.")
    return a, y


def make_pmc(a: npt.ArrayLike, y: npt.ArrayLike, mu: float, gamma: float) -> LimesProblem:
    """
    Debiased sparse modeling with the projective minimax concave penalty:

        0.5 ||A x - y||^2 + mu * (||x||_1 - min_v [||v||_1 + ||P x - v||^2 / (2 gamma)]),

    where P projects onto range(A^T), the subspace in which A can observe x.

    :param a: The m x n system matrix.
    :param y: The m observations.
    :param mu: The regularization parameter.
    :param gamma: The envelope index.
    """
    _require_positive(mu=mu, gamma=gamma)
    a, y = _system(a, y)
    n = a.shape[1]
    return LimesProblem(
        a1=AffineOperator(matrix=a, offset=-y),
        a2=AffineOperator.identity(n),
        l_matrix=projector_range_adjoint(a),
        d=_envelope_scaling(n, gamma),
        seed=L1Norm(n),
        mu=mu,
        application=Application.PMC,
        parameters={"gamma": gamma},
    )


def make_mc(a: npt.ArrayLike, y: npt.ArrayLike, mu: float, gamma: float) -> LimesProblem:
    """Sparse modeling with the plain minimax concave penalty (L = I)."""
    _require_positive(mu=mu, gamma=gamma)
    a, y = _system(a, y)
    n = a.shape[1]
    return LimesProblem(
        a1=AffineOperator(matrix=a, offset=-y),
        a2=AffineOperator.identity(n),
        l_matrix=np.eye(n),
        d=_envelope_scaling(n, gamma),
        seed=L1Norm(n),
        mu=mu,
        application=Application.MC,
        parameters={"gamma": gamma},
    )


def make_sorr(
    a: npt.ArrayLike,
    y: npt.ArrayLike,
    sigma_x: float,
    sigma_eps: float,
    mu: float,
    gamma: float,
) -> LimesProblem:
    """
    Stable outlier-robust regression. The variable stacks the regression vector x (length n)
    and the noise vector eps (length m); the residual y - A x - eps is penalized by the
    enhanced l1 norm while x and eps are penalized by their standard deviations.

    :param a: The m x n system matrix.
    :param y: The m observations.
    :param sigma_x: The standard deviation of the regression coefficients.
    :param sigma_eps: The standard deviation of the noise.
    :param mu: The regularization parameter.
    :param gamma: The envelope index.
    """
    _require_positive(sigma_x=sigma_x, sigma_eps=sigma_eps, mu=mu, gamma=gamma)
    a, y = _system(a, y)
    m, n = a.shape
    weights = np.concatenate([np.full(n, 1.0 / sigma_x), np.full(m, 1.0 / sigma_eps)])
    return LimesProblem(
        a1=AffineOperator.linear(np.diag(weights)),
        a2=AffineOperator(matrix=np.hstack([a, np.eye(m)]), offset=-y),
        l_matrix=np.eye(m),
        d=_envelope_scaling(m, gamma),
        seed=L1Norm(m),
        mu=mu,
        application=Application.SORR,
        parameters={"gamma": gamma, "sigma_x": sigma_x, "sigma_eps": sigma_eps},
    )


def make_orr(a: npt.ArrayLike, y: npt.ArrayLike, mu: float, gamma: float) -> LimesProblem:
    """Outlier-robust regression: 0.5 ||x||^2 + mu * Psi_enhanced(A x - y)."""
    _require_positive(mu=mu, gamma=gamma)
    a, y = _system(a, y)
    m, n = a.shape
    return LimesProblem(
        a1=AffineOperator.linear(np.eye(n)),
        a2=AffineOperator(matrix=a, offset=-y),
        l_matrix=np.eye(m),
        d=_envelope_scaling(m, gamma),
        seed=L1Norm(m),
        mu=mu,
        application=Application.ORR,
        parameters={"gamma": gamma},
    )


def make_spcp(y: npt.ArrayLike, mu_l: float, mu_s: float, gamma: float) -> LimesProblem:
    """
    Stable principal component pursuit of Y = L + S + W.

    The variable is the row-major flattening of L followed by that of S. The penalty is the
    sum of the enhanced nuclear norm of L and the enhanced l1 norm of S, both enhanced over
    the subspace {L = S}, so that the problem keeps mu = 1 and carries mu_L and mu_S in the
    block weights and in the block scales of D.

    :param y: The n x m observed matrix.
    :param mu_l: The weight of the low-rank term.
    :param mu_s: The weight of the sparse term.
    :param gamma: The envelope index.
    """
    _require_positive(mu_l=mu_l, mu_s=mu_s, gamma=gamma)
    y = as_matrix(y, "Y")
    rows, cols = y.shape
    size = rows * cols
    identity = np.eye(size)
    return LimesProblem(
        a1=AffineOperator(matrix=np.hstack([identity, identity]), offset=-y.reshape(-1)),
        a2=AffineOperator.identity(2 * size),
        l_matrix=0.5 * np.block([[identity, identity], [identity, identity]]),
        d=BlockScalarDiagonal.from_blocks(
            [size, size], [np.sqrt(mu_l / gamma), np.sqrt(mu_s / gamma)]
        ),
        seed=BlockSum.of((mu_l, NuclearNorm((rows, cols))), (mu_s, L1Norm(size))),
        mu=1.0,
        application=Application.SPCP,
        parameters={"gamma": gamma, "mu_l": mu_l, "mu_s": mu_s, "rows": rows, "cols": cols},
    )


def split_spcp(problem: LimesProblem, x: npt.ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    """Splits an SPCP point into its low-rank and sparse matrices."""
    rows, cols = int(problem.parameters["rows"]), int(problem.parameters["cols"])
    point = np.asarray(x, dtype=np.float64).reshape(2, rows, cols)
    return point[0], point[1]


def make_classify(
    samples: npt.ArrayLike, labels: npt.ArrayLike, mu: float, gamma: float
) -> LimesProblem:
    """
    Linear classification with the Moreau-enhanced hinge loss:

        0.5 ||x||^2 + mu * sum_i ME-hinge(y_i a_i^T x - 1).

    Samples are normalized to unit norm.

    :param samples: The m x n matrix whose rows are the samples a_i.
    :param labels: The m labels in {-1, +1}.
    :param mu: The regularization parameter.
    :param gamma: The envelope index.
    :raises InputError: If a sample is zero or a label is not +-1.
    """
    _require_positive(mu=mu, gamma=gamma)
    samples = as_matrix(samples, "samples")
    labels = as_vector(labels, "labels")
    m, n = samples.shape
    if labels.shape[0] != m:
        raise InputError(f"Got {labels.shape[0]} labels for {m} samples.")
    if not np.all(np.isin(labels, (-1.0, 1.0))):
        raise InputError("Labels must be -1 or +1.")
    norms = np.linalg.norm(samples, axis=1)
    if np.any(norms == 0):
        raise InputError(f"Samples {np.flatnonzero(norms == 0).tolist()} are zero vectors.")
    m2 = labels[:, np.newaxis] * samples / norms[:, np.newaxis]
    return LimesProblem(
        a1=AffineOperator.linear(np.eye(n)),
        a2=AffineOperator(matrix=m2, offset=-np.ones(m)),
        l_matrix=np.eye(m),
        d=_envelope_scaling(m, gamma),
        seed=BoxSupport(m),
        mu=mu,
        application=Application.CLASSIFY,
        parameters={"gamma": gamma},
    )


def make_mc_tv(y: npt.ArrayLike, mu: float, gamma: float) -> LimesProblem:
    """Total-variation denoising of a signal with the minimax concave penalty."""
    _require_positive(mu=mu, gamma=gamma)
    y = as_vector(y, "y")
    n = y.shape[0]
    difference = first_difference(n)
    return LimesProblem(
        a1=AffineOperator.identity(n, offset=-y),
        a2=AffineOperator.linear(difference),
        l_matrix=np.eye(n - 1),
        d=_envelope_scaling(n - 1, gamma),
        seed=L1Norm(n - 1),
        mu=mu,
        application=Application.MC_TV,
        parameters={"gamma": gamma},
    )


def make_men(y: npt.ArrayLike, mu: float, gamma: float) -> LimesProblem:
    """Matrix denoising with the Moreau-enhanced nuclear norm, on the row-major flattening."""
    _require_positive(mu=mu, gamma=gamma)
    y = as_matrix(y, "Y")
    size = y.size
    return LimesProblem(
        a1=AffineOperator.identity(size, offset=-y.reshape(-1)),
        a2=AffineOperator.identity(size),
        l_matrix=np.eye(size),
        d=_envelope_scaling(size, gamma),
        seed=NuclearNorm(y.shape),
        mu=mu,
        application=Application.MEN,
        parameters={"gamma": gamma, "rows": y.shape[0], "cols": y.shape[1]},
    )
