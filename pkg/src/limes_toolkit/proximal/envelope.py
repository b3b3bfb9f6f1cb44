"""
This module contains the Moreau-envelope calculus built on top of the seed catalog:
evaluation, proximity operators, envelopes and their gradients, conjugate proximity
operators and the block-scaled compositions used by the LiMES model.
"""

import numpy as np
import numpy.typing as npt

from limes_toolkit.errors import InputError
from limes_toolkit.linop.operators import BlockScalarDiagonal
from limes_toolkit.proximal.seeds import BlockSum, ProximableSeed, as_point
from limes_toolkit.types import FloatArray


def _require_positive(value: float, name: str) -> None:
    if not value > 0:
        raise InputError(f"{name} must be strictly positive, got {value}.")


def evaluate(seed: ProximableSeed, z: npt.ArrayLike) -> float:
    """
    Evaluates the seed at `z`.

    :param seed: The seed function.
    :param z: A point whose size matches the seed dimension (matrices are flattened).
    :return: The exact value.
    :raises InputError: If the size does not match.
    """
    return seed.evaluate(as_point(seed, z))


def prox(seed: ProximableSeed, z: npt.ArrayLike, gamma: float) -> FloatArray:
    """
    The proximity operator of `gamma * seed` at `z`, returned with the shape of `z`.

    :raises InputError: If gamma <= 0 or the size does not match.
    """
    _require_positive(gamma, "gamma")
    shape = np.shape(z)
    return seed.prox(as_point(seed, z), gamma).reshape(shape)


def moreau_envelope(seed: ProximableSeed, z: npt.ArrayLike, gamma: float) -> float:
    """The Moreau envelope of index `gamma`, evaluated through the proximity operator."""
    point = as_point(seed, z)
    proximal = prox(seed, point, gamma)
    return seed.evaluate(proximal) + float(np.sum((point - proximal) ** 2)) / (2.0 * gamma)


def moreau_gradient(seed: ProximableSeed, z: npt.ArrayLike, gamma: float) -> FloatArray:
    """The gradient (z - prox(z)) / gamma of the Moreau envelope of index `gamma`."""
    shape = np.shape(z)
    point = as_point(seed, z)
    return ((point - prox(seed, point, gamma)) / gamma).reshape(shape)


def conjugate_prox(seed: ProximableSeed, z: npt.ArrayLike, sigma: float) -> FloatArray:
    """
    The proximity operator of `sigma` times the convex conjugate, obtained from the Moreau
    decomposition z - sigma * prox(z / sigma, 1 / sigma).
    """
    _require_positive(sigma, "sigma")
    shape = np.shape(z)
    point = as_point(seed, z)
    return (point - sigma * seed.prox(point / sigma, 1.0 / sigma)).reshape(shape)


def conjugate_envelope(seed: ProximableSeed, w: npt.ArrayLike, index: float) -> float:
    """
    The Moreau envelope of index `index` of the convex conjugate, at `w`.

    Together with `moreau_envelope` it satisfies
    moreau_envelope(z, g) + conjugate_envelope(z / g, 1 / g) = ||z||^2 / (2 g).
    """
    point = as_point(seed, w)
    proximal = conjugate_prox(seed, point, index)
    return seed.conjugate_evaluate(proximal) + float(np.sum((point - proximal) ** 2)) / (
        2.0 * index
    )


def shifted_conjugate_prox(
    seed: ProximableSeed,
    mu: float,
    offset: npt.ArrayLike,
    z: npt.ArrayLike,
    sigma: float,
) -> FloatArray:
    """
    The proximity operator of `sigma` times the conjugate of v -> mu * seed(v + offset):

        z + sigma * offset - sigma * prox(seed, z / sigma + offset, mu / sigma)

    :param seed: The unshifted seed.
    :param mu: The scale of the shifted seed.
    :param offset: The shift, of the seed dimension.
    :param z: The point.
    :param sigma: The step of the conjugate proximity operator.
    """
    _require_positive(mu, "mu")
    _require_positive(sigma, "sigma")
    shape = np.shape(z)
    point = as_point(seed, z)
    shift = as_point(seed, offset)
    return (
        point + sigma * shift - sigma * seed.prox(point / sigma + shift, mu / sigma)
    ).reshape(shape)


def _aligned_blocks(
    seed: ProximableSeed, d: BlockScalarDiagonal
) -> list[tuple[int, int, float, ProximableSeed, float]]:
    """Pairs every block of `d` with the (weight, seed) acting on the same coordinates."""
    if d.dim != seed.dim:
        raise InputError(f"D has dimension {d.dim} but the seed has dimension {seed.dim}.")
    if len(d.ranges) == 1:
        return [(0, seed.dim, 1.0, seed, d.scales[0])]
    if isinstance(seed, BlockSum) and seed.ranges == d.ranges:
        return [
            (block.start, block.stop, block.weight, block.seed, scale)
            for block, scale in zip(seed.blocks, d.scales)
        ]
    if d.is_scalar:
        return [(0, seed.dim, 1.0, seed, d.scales[0])]
    raise InputError(f"The blocks {d.ranges} of D are not aligned with the seed blocks.")


def scaled_prox(seed: ProximableSeed, d: BlockScalarDiagonal, v: npt.ArrayLike) -> FloatArray:
    """
    The proximity operator of u -> seed(D^{-1} u) at `v`. On a block with scale `s` and
    weight `w` it is s * prox(seed_b, v_b / s, w / s^2).

    :raises InputError: If D is not scalar and its blocks differ from the seed blocks.
    """
    point = as_point(seed, v)
    out = np.empty_like(point)
    for start, stop, weight, inner, scale in _aligned_blocks(seed, d):
        out[start:stop] = scale * inner.prox(point[start:stop] / scale, weight / scale**2)
    return out


def enhancement_minimizer(
    seed: ProximableSeed, d: BlockScalarDiagonal, p: npt.ArrayLike
) -> FloatArray:
    """The minimizer over v of seed(v) + ||D (p - v)||^2 / 2, i.e. D^{-1} scaled_prox(D p)."""
    point = as_point(seed, p)
    return scaled_prox(seed, d, d.apply(point)) / d.diagonal()


def enhancement_value(seed: ProximableSeed, d: BlockScalarDiagonal, p: npt.ArrayLike) -> float:
    """The minimum over v of seed(v) + ||D (p - v)||^2 / 2."""
    point = as_point(seed, p)
    minimizer = enhancement_minimizer(seed, d, point)
    return seed.evaluate(minimizer) + 0.5 * float(np.sum((d.apply(point - minimizer)) ** 2))
