"""Spectral quantities of dense matrices: projectors, extreme eigenvalues, operator norms."""

import numpy as np
import numpy.typing as npt
import scipy.linalg

from limes_toolkit.constants import RANK_CUTOFF_FACTOR
from limes_toolkit.errors import DegenerateInputError, InputError, NumericalError
from limes_toolkit.linop.operators import as_matrix
from limes_toolkit.types import FloatArray


def rank_cutoff(matrix: FloatArray, sigma_max: float) -> float:
    """The threshold above which a singular value of `matrix` counts as non-zero."""
    return max(matrix.shape) * sigma_max * RANK_CUTOFF_FACTOR


def _require_nonzero(matrix: FloatArray) -> None:
    if not np.any(matrix):
        raise InputError("The matrix must not be the zero matrix.")


def projector_range_adjoint(a: npt.ArrayLike) -> FloatArray:
    """
    Returns the orthogonal projector onto range(A^T), i.e. pinv(A) A, from an SVD of A with
    the numerical-rank cutoff.

    :param a: A non-zero matrix.
    :return: A symmetric idempotent matrix of size cols x cols.
    """
    a = as_matrix(a, "A")
    _require_nonzero(a)
    _, sigma, vt = scipy.linalg.svd(a, full_matrices=False)
    rank = int(np.sum(sigma > rank_cutoff(a, sigma[0])))
    basis = vt[:rank]
    projector = basis.T @ basis
    projector = 0.5 * (projector + projector.T)
    projector.setflags(write=False)
    return projector


def lambda_max_gram(m: npt.ArrayLike) -> float:
    """
    Largest eigenvalue of M^T M (the squared operator norm of M).

    The value comes from a dense symmetric eigensolve of the smaller of the two Gram
    matrices, which share their non-zero spectrum.

    :raises NumericalError: If the eigensolver does not converge.
    """
    m = as_matrix(m, "M")
    _require_nonzero(m)
    gram = m.T @ m if m.shape[1] <= m.shape[0] else m @ m.T
    k = gram.shape[0]
    try:
        top = scipy.linalg.eigvalsh(0.5 * (gram + gram.T), subset_by_index=[k - 1, k - 1])
    except scipy.linalg.LinAlgError as error:
        raise NumericalError(f"The eigensolver did not converge: {error}") from error
    return float(top[0])


def operator_norm(m: npt.ArrayLike) -> float:
    """The spectral norm ||M||, as the square root of `lambda_max_gram`."""
    return float(np.sqrt(lambda_max_gram(m)))


def lambda_min_pp_gram(m: npt.ArrayLike) -> float:
    """
    Smallest strictly positive eigenvalue of M^T M, where "positive" means that the
    corresponding singular value of M is above the rank cutoff.

    :raises DegenerateInputError: If no singular value is above the cutoff.
    """
    m = as_matrix(m, "M")
    _require_nonzero(m)
    sigma = scipy.linalg.svdvals(m)
    kept = sigma[sigma > rank_cutoff(m, sigma[0])]
    if kept.size == 0:
        raise DegenerateInputError("Every singular value is below the rank cutoff.")
    return float(kept[-1] ** 2)


def smallest_eigenvalue(s: npt.ArrayLike) -> float:
    """Smallest eigenvalue of a symmetric matrix (symmetrized before the solve)."""
    s = as_matrix(s, "S")
    if s.shape[0] != s.shape[1]:
        raise InputError(f"Expected a square matrix, got shape {s.shape}.")
    return float(scipy.linalg.eigvalsh(0.5 * (s + s.T), subset_by_index=[0, 0])[0])
