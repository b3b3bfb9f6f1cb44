"""Dense affine operators and block-scalar diagonal scalings."""

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import numpy.typing as npt

from limes_toolkit.errors import InputError
from limes_toolkit.types import FloatArray


def as_matrix(value: npt.ArrayLike, name: str = "matrix") -> FloatArray:
    """
    Converts `value` to a read-only 2-D float64 array.

    :param value: Anything numpy can turn into a 2-D array.
    :param name: Name used in error messages.
    :raises InputError: If the array is not 2-D, is empty or has non-finite entries.
    """
    matrix = np.array(value, dtype=np.float64)
    if matrix.ndim != 2:
        raise InputError(f"{name} must be 2-D, got shape {matrix.shape}.")
    if matrix.shape[0] < 1 or matrix.shape[1] < 1:
        raise InputError(f"{name} must have at least one row and one column.")
    if not np.all(np.isfinite(matrix)):
        raise InputError(f"{name} has non-finite entries.")
    matrix.setflags(write=False)
    return matrix


def as_vector(value: npt.ArrayLike, name: str = "vector") -> FloatArray:
    """
    Converts `value` to a read-only flat float64 array.

    :raises InputError: If the array has non-finite entries.
    """
    vector = np.array(value, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(vector)):
        raise InputError(f"{name} has non-finite entries.")
    vector.setflags(write=False)
    return vector


@dataclass(frozen=True, eq=False)
class AffineOperator:
    """
    The affine map x -> M x + c between two Euclidean spaces.
    """

    matrix: FloatArray
    """The linear part M, of shape (out_dim, in_dim)."""

    offset: FloatArray
    """The offset c, of length out_dim."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", as_matrix(self.matrix, "operator matrix"))
        object.__setattr__(self, "offset", as_vector(self.offset, "operator offset"))
        if self.offset.shape[0] != self.matrix.shape[0]:
            raise InputError(
                f"Offset length {self.offset.shape[0]} does not match the "
                f"{self.matrix.shape[0]} rows of the operator."
            )

    @classmethod
    def linear(cls, matrix: npt.ArrayLike) -> "AffineOperator":
        """Creates the operator x -> M x (zero offset)."""
        matrix = as_matrix(matrix)
        return cls(matrix=matrix, offset=np.zeros(matrix.shape[0]))

    @classmethod
    def identity(cls, dim: int, offset: npt.ArrayLike | None = None) -> "AffineOperator":
        """Creates the operator x -> x + offset on a space of dimension `dim`."""
        return cls(
            matrix=np.eye(dim), offset=np.zeros(dim) if offset is None else np.asarray(offset)
        )

    @property
    def in_dim(self) -> int:
        return int(self.matrix.shape[1])

    @property
    def out_dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def is_identity(self) -> bool:
        """Whether the linear part is the identity matrix (the offset may be non-zero)."""
        return self.in_dim == self.out_dim and bool(
            np.array_equal(self.matrix, np.eye(self.in_dim))
        )

    @property
    def is_zero(self) -> bool:
        return not np.any(self.matrix)

    def apply(self, x: npt.ArrayLike) -> FloatArray:
        x = np.asarray(x, dtype=np.float64).reshape(-1)
        if x.shape[0] != self.in_dim:
            raise InputError(f"Expected a point of length {self.in_dim}, got {x.shape[0]}.")
        return self.matrix @ x + self.offset

    def adjoint_apply(self, z: npt.ArrayLike) -> FloatArray:
        """Applies the adjoint of the linear part only; the offset is ignored."""
        z = np.asarray(z, dtype=np.float64).reshape(-1)
        if z.shape[0] != self.out_dim:
            raise InputError(f"Expected a point of length {self.out_dim}, got {z.shape[0]}.")
        return self.matrix.T @ z


def apply(op: AffineOperator, x: npt.ArrayLike) -> FloatArray:
    """Returns M x + c."""
    return op.apply(x)


def adjoint_apply(op: AffineOperator, z: npt.ArrayLike) -> FloatArray:
    """Returns M^T z."""
    return op.adjoint_apply(z)


@dataclass(frozen=True)
class BlockScalarDiagonal:
    """
    A positive definite diagonal operator that is a multiple of the identity on each block of
    a partition of the coordinates.
    """

    ranges: tuple[tuple[int, int], ...]
    """Half-open index ranges [start, stop), contiguous and covering [0, dim)."""

    scales: tuple[float, ...]
    """The strictly positive scale of each block."""

    def __post_init__(self) -> None:
        ranges = tuple((int(start), int(stop)) for start, stop in self.ranges)
        scales = tuple(float(scale) for scale in self.scales)
        object.__setattr__(self, "ranges", ranges)
        object.__setattr__(self, "scales", scales)
        if not ranges:
            raise InputError("A block diagonal operator needs at least one block.")
        if len(ranges) != len(scales):
            raise InputError(f"Got {len(ranges)} blocks but {len(scales)} scales.")
        expected_start = 0
        for start, stop in ranges:
            if start != expected_start or stop <= start:
                raise InputError(f"Blocks {ranges} are not a contiguous partition.")
            expected_start = stop
        if any(not np.isfinite(scale) or scale <= 0 for scale in scales):
            raise InputError(f"Every block scale must be strictly positive, got {scales}.")

    @classmethod
    def scalar(cls, dim: int, scale: float) -> "BlockScalarDiagonal":
        """The operator scale * I on a space of dimension `dim`."""
        return cls(ranges=((0, dim),), scales=(scale,))

    @classmethod
    def from_blocks(
        cls, sizes: Sequence[int], scales: Sequence[float]
    ) -> "BlockScalarDiagonal":
        """Builds the operator from consecutive block sizes."""
        bounds = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
        return cls(
            ranges=tuple(zip(bounds[:-1].tolist(), bounds[1:].tolist())),
            scales=tuple(scales),
        )

    @property
    def dim(self) -> int:
        return self.ranges[-1][1]

    @property
    def is_scalar(self) -> bool:
        return len(set(self.scales)) == 1

    @property
    def max_scale(self) -> float:
        return max(self.scales)

    def diagonal(self) -> FloatArray:
        """The diagonal entries as a flat array."""
        diag = np.empty(self.dim)
        for (start, stop), scale in zip(self.ranges, self.scales):
            diag[start:stop] = scale
        return diag

    def apply(self, v: npt.ArrayLike) -> FloatArray:
        v = np.asarray(v, dtype=np.float64).reshape(-1)
        if v.shape[0] != self.dim:
            raise InputError(f"Expected a point of length {self.dim}, got {v.shape[0]}.")
        return self.diagonal() * v


def first_difference(n: int) -> FloatArray:
    """
    The (n-1) x n first-order difference matrix, whose rows are (-1, 1) shifted along the
    diagonal.

    :raises InputError: If n < 2.
    """
    if n < 2:
        raise InputError(f"The difference operator needs n >= 2, got {n}.")
    matrix = np.eye(n - 1, n, k=1) - np.eye(n - 1, n)
    matrix.setflags(write=False)
    return matrix
