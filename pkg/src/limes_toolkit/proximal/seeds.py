"""
This module implements the catalog of proximable seed functions: closed proper convex
functions with an exact proximity operator and an exact convex conjugate.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import scipy.linalg

from limes_toolkit.errors import InputError
from limes_toolkit.linop.operators import as_vector
from limes_toolkit.linop.spectral import rank_cutoff
from limes_toolkit.types import FloatArray

CONJUGATE_TOL = 1e-9
"""Slack allowed when testing membership of the dual ball in conjugate evaluations."""


def soft_threshold(z: FloatArray, threshold: float | FloatArray) -> FloatArray:
    """Elementwise sign(z) max{0, |z| - threshold}."""
    return np.sign(z) * np.maximum(np.abs(z) - threshold, 0.0)


def _indicator(inside: bool) -> float:
    return 0.0 if inside else np.inf


class ProximableSeed(ABC):
    """
    A seed function acting on flat points of a fixed dimension.
    """

    @property
    @abstractmethod
    def dim(self) -> int:
        """The dimension of the (flattened) domain."""

    @abstractmethod
    def evaluate(self, z: FloatArray) -> float:
        """The value at the flat point `z`."""

    @abstractmethod
    def prox(self, z: FloatArray, gamma: float) -> FloatArray:
        """The minimizer of f(v) + ||z - v||^2 / (2 gamma) for gamma > 0."""

    @abstractmethod
    def conjugate_evaluate(self, z: FloatArray) -> float:
        """The value of the convex conjugate at `z` (possibly +inf)."""


@dataclass(frozen=True)
class L1Norm(ProximableSeed):
    """The l1 norm on R^size."""

    size: int

    @property
    def dim(self) -> int:
        return self.size

    def evaluate(self, z: FloatArray) -> float:
        return float(np.sum(np.abs(z)))

    def prox(self, z: FloatArray, gamma: float) -> FloatArray:
        return soft_threshold(z, gamma)

    def conjugate_evaluate(self, z: FloatArray) -> float:
        return _indicator(bool(np.max(np.abs(z), initial=0.0) <= 1.0 + CONJUGATE_TOL))


@dataclass(frozen=True)
class NuclearNorm(ProximableSeed):
    """The nuclear norm of a matrix of the given shape, stored row-major in a flat point."""

    shape: tuple[int, int]

    @property
    def dim(self) -> int:
        return self.shape[0] * self.shape[1]

    def evaluate(self, z: FloatArray) -> float:
        return float(np.sum(scipy.linalg.svdvals(z.reshape(self.shape))))

    def prox(self, z: FloatArray, gamma: float) -> FloatArray:
        matrix = z.reshape(self.shape)
        u, sigma, vt = scipy.linalg.svd(matrix, full_matrices=False)
        shrunk = np.maximum(sigma - gamma, 0.0)
        if sigma[0] > 0:
            shrunk[sigma <= rank_cutoff(matrix, sigma[0])] = 0.0
        return ((u * shrunk) @ vt).reshape(-1)

    def conjugate_evaluate(self, z: FloatArray) -> float:
        spectral_norm = scipy.linalg.svdvals(z.reshape(self.shape))[0]
        return _indicator(bool(spectral_norm <= 1.0 + CONJUGATE_TOL))


@dataclass(frozen=True)
class BoxSupport(ProximableSeed):
    """
    The support function of the box [-1, 0]^size, i.e. z -> sum_i max{0, -z_i}. Composed with
    y_i a_i^T x - 1 it is the hinge loss.
    """

    size: int

    @property
    def dim(self) -> int:
        return self.size

    def evaluate(self, z: FloatArray) -> float:
        return float(np.sum(np.maximum(0.0, -z)))

    def prox(self, z: FloatArray, gamma: float) -> FloatArray:
        # Moreau decomposition: the conjugate is the indicator of the box
        return z - gamma * np.clip(z / gamma, -1.0, 0.0)

    def conjugate_evaluate(self, z: FloatArray) -> float:
        inside = np.all(z >= -1.0 - CONJUGATE_TOL) and np.all(z <= CONJUGATE_TOL)
        return _indicator(bool(inside))


@dataclass(frozen=True)
class SeedBlock:
    """One weighted summand of a `BlockSum`, acting on the coordinates [start, stop)."""

    start: int
    stop: int
    weight: float
    seed: ProximableSeed

    def __post_init__(self) -> None:
        if self.weight <= 0:
            raise InputError(f"Block weights must be strictly positive, got {self.weight}.")
        if self.stop - self.start != self.seed.dim:
            raise InputError(
                f"Block [{self.start}, {self.stop}) does not match the seed dimension "
                f"{self.seed.dim}."
            )


@dataclass(frozen=True)
class BlockSum(ProximableSeed):
    """The separable sum of weighted seeds over a contiguous partition of the coordinates."""

    blocks: tuple[SeedBlock, ...]

    def __post_init__(self) -> None:
        expected_start = 0
        for block in self.blocks:
            if block.start != expected_start:
                raise InputError("BlockSum ranges must be contiguous and start at 0.")
            expected_start = block.stop
        if not self.blocks:
            raise InputError("BlockSum needs at least one block.")

    @classmethod
    def of(cls, *weighted_seeds: tuple[float, ProximableSeed]) -> "BlockSum":
        """Stacks (weight, seed) pairs one after the other."""
        blocks = []
        start = 0
        for weight, seed in weighted_seeds:
            blocks.append(SeedBlock(start, start + seed.dim, weight, seed))
            start += seed.dim
        return cls(blocks=tuple(blocks))

    @property
    def dim(self) -> int:
        return self.blocks[-1].stop

    @property
    def ranges(self) -> tuple[tuple[int, int], ...]:
        return tuple((block.start, block.stop) for block in self.blocks)

    def evaluate(self, z: FloatArray) -> float:
        return float(
            sum(
                block.weight * block.seed.evaluate(z[block.start : block.stop])
                for block in self.blocks
            )
        )

    def prox(self, z: FloatArray, gamma: float) -> FloatArray:
        out = np.empty_like(z)
        for block in self.blocks:
            out[block.start : block.stop] = block.seed.prox(
                z[block.start : block.stop], gamma * block.weight
            )
        return out

    def conjugate_evaluate(self, z: FloatArray) -> float:
        # (w f)^*(z) = w f^*(z / w)
        return float(
            sum(
                block.weight
                * block.seed.conjugate_evaluate(z[block.start : block.stop] / block.weight)
                for block in self.blocks
            )
        )


@dataclass(frozen=True, eq=False)
class Shifted(ProximableSeed):
    """The seed z -> scale * inner(z + offset)."""

    inner: ProximableSeed
    offset: FloatArray
    scale: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "offset", as_vector(self.offset, "shift offset"))
        if self.offset.shape[0] != self.inner.dim:
            raise InputError(
                f"Shift offset of length {self.offset.shape[0]} does not match the seed "
                f"dimension {self.inner.dim}."
            )
        if self.scale <= 0:
            raise InputError(f"The shift scale must be strictly positive, got {self.scale}.")

    @property
    def dim(self) -> int:
        return self.inner.dim

    def evaluate(self, z: FloatArray) -> float:
        return self.scale * self.inner.evaluate(z + self.offset)

    def prox(self, z: FloatArray, gamma: float) -> FloatArray:
        return self.inner.prox(z + self.offset, gamma * self.scale) - self.offset

    def conjugate_evaluate(self, z: FloatArray) -> float:
        return self.scale * self.inner.conjugate_evaluate(z / self.scale) - float(
            self.offset @ z
        )


def as_point(seed: ProximableSeed, z: npt.ArrayLike) -> FloatArray:
    """Flattens `z` and checks that it lives in the domain of `seed`."""
    point = np.asarray(z, dtype=np.float64).reshape(-1)
    if point.shape[0] != seed.dim:
        raise InputError(f"Expected a point of size {seed.dim}, got {point.shape[0]}.")
    return point
