"""
This module generates the synthetic data of the experiments. Every trial draws from its own
random stream, derived from (master_seed, trial), so that trials can run in any order.
"""

from dataclasses import dataclass

import numpy as np

from limes_toolkit.bench.spec import ExperimentSpec
from limes_toolkit.errors import InputError
from limes_toolkit.types import FloatArray


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    """The random generator of one trial."""
    return np.random.default_rng(np.random.SeedSequence([master_seed, trial]))


def db_to_ratio(value_db: float) -> float:
    return float(10.0 ** (value_db / 10.0))


def _rescale_to_energy(vector: FloatArray, energy: float) -> FloatArray:
    current = float(vector @ vector)
    if current == 0.0:
        return vector
    return vector * np.sqrt(energy / current)


@dataclass(frozen=True, eq=False)
class SparseModel:
    """y = A x_true + noise with an s-sparse x_true."""

    a: FloatArray
    x_true: FloatArray
    noise: FloatArray
    y: FloatArray


@dataclass(frozen=True, eq=False)
class OutlierModel:
    """y = A x_true + noise + outliers with dense x_true and sparse outliers."""

    a: FloatArray
    x_true: FloatArray
    noise: FloatArray
    outliers: FloatArray
    y: FloatArray


@dataclass(frozen=True, eq=False)
class SpcpModel:
    """Y = low_rank + sparse + noise."""

    low_rank: FloatArray
    sparse: FloatArray
    noise: FloatArray
    y: FloatArray


@dataclass(frozen=True, eq=False)
class ClassifyModel:
    """Unit-norm samples labeled by the sign of their projection on a unit vector."""

    samples: FloatArray
    labels: FloatArray
    w_true: FloatArray


def gen_sparse_model(spec: ExperimentSpec, trial: int) -> SparseModel:
    """
    Draws A with i.i.d. standard Gaussian entries, x_true with `spec.s` standard Gaussian
    nonzeros at uniformly random positions, and Gaussian noise rescaled so that
    ||A x_true||^2 / ||noise||^2 equals the target SNR.

    :raises InputError: If s > n.
    """
    if spec.s > spec.n:
        raise InputError(f"s={spec.s} exceeds n={spec.n}.")
    rng = trial_rng(spec.master_seed, trial)
    a = rng.standard_normal((spec.m, spec.n))
    x_true = np.zeros(spec.n)
    support = rng.choice(spec.n, size=spec.s, replace=False)
    x_true[support] = rng.standard_normal(spec.s)
    signal = a @ x_true
    noise = _rescale_to_energy(
        rng.standard_normal(spec.m), float(signal @ signal) / db_to_ratio(spec.snr_db)
    )
    return SparseModel(a=a, x_true=x_true, noise=noise, y=signal + noise)


def gen_outlier_model(spec: ExperimentSpec, trial: int) -> OutlierModel:
    """
    Draws A and x_true with i.i.d. standard Gaussian entries, noise at the target SNR and
    round(density * m) Gaussian outliers rescaled to the target signal-to-outlier ratio.
    """
    rng = trial_rng(spec.master_seed, trial)
    a = rng.standard_normal((spec.m, spec.n))
    x_true = rng.standard_normal(spec.n)
    signal = a @ x_true
    signal_energy = float(signal @ signal)
    noise = _rescale_to_energy(
        rng.standard_normal(spec.m), signal_energy / db_to_ratio(spec.snr_db)
    )
    count = spec.outlier_count
    support = rng.choice(spec.m, size=count, replace=False)
    values = rng.standard_normal(count)
    outliers = np.zeros(spec.m)
    if count:
        energy = count * (signal_energy / spec.m) / db_to_ratio(spec.sor_db)
        outliers[support] = _rescale_to_energy(values, energy)
    return OutlierModel(
        a=a, x_true=x_true, noise=noise, outliers=outliers, y=signal + noise + outliers
    )


def gen_spcp_model(
    rows: int,
    cols: int,
    rank: int,
    sparse_fraction: float,
    noise_sigma: float,
    seed: int | np.random.Generator,
    sparse_scale: float = 10.0,
) -> SpcpModel:
    """
    Draws a rank-`rank` matrix as the product of two Gaussian factors, a sparse matrix with
    round(fraction * rows * cols) Gaussian entries of standard deviation `sparse_scale`, and
    i.i.d. Gaussian noise of standard deviation `noise_sigma`.

    :raises InputError: If the rank exceeds min(rows, cols).
    """
    if not 0 <= rank <= min(rows, cols):
        raise InputError(f"rank={rank} must lie in [0, {min(rows, cols)}].")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    low_rank = rng.standard_normal((rows, rank)) @ rng.standard_normal((rank, cols))
    count = int(np.rint(sparse_fraction * rows * cols))
    sparse = np.zeros(rows * cols)
    positions = rng.choice(rows * cols, size=count, replace=False)
    sparse[positions] = sparse_scale * rng.standard_normal(count)
    noise = noise_sigma * rng.standard_normal((rows, cols))
    sparse = sparse.reshape(rows, cols)
    return SpcpModel(low_rank=low_rank, sparse=sparse, noise=noise, y=low_rank + sparse + noise)


def gen_classify_model(spec: ExperimentSpec, trial: int) -> ClassifyModel:
    """
    Draws a unit vector w_true and `spec.m` unit-norm Gaussian samples a with
    |a . w_true| >= `spec.classify_margin`, labeled by sign(a . w_true).
    """
    rng = trial_rng(spec.master_seed, trial)
    w_true = rng.standard_normal(spec.n)
    w_true /= np.linalg.norm(w_true)
    kept: list[FloatArray] = []
    count = 0
    while count < spec.m:
        batch = rng.standard_normal((2 * spec.m, spec.n))
        batch /= np.linalg.norm(batch, axis=1, keepdims=True)
        batch = batch[np.abs(batch @ w_true) >= spec.classify_margin]
        kept.append(batch)
        count += batch.shape[0]
    samples = np.vstack(kept)[: spec.m]
    return ClassifyModel(samples=samples, labels=np.sign(samples @ w_true), w_true=w_true)
