"""This module defines the public interface of the dense linear-algebra layer."""

from limes_toolkit.linop.operators import (
    AffineOperator,
    BlockScalarDiagonal,
    adjoint_apply,
    apply,
    as_matrix,
    as_vector,
    first_difference,
)
from limes_toolkit.linop.spectral import (
    lambda_max_gram,
    lambda_min_pp_gram,
    operator_norm,
    projector_range_adjoint,
    smallest_eigenvalue,
)
