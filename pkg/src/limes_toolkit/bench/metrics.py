"""This module implements the error and sparsity metrics reported by the experiments."""

import numpy as np
import numpy.typing as npt

from limes_toolkit.errors import InputError


def hoyer_sparseness(x: npt.ArrayLike) -> float:
    """
    The Hoyer sparseness [n / (n - sqrt(n))] [1 - ||x||_1 / (sqrt(n) ||x||_2)], in [0, 1].
    The zero vector and vectors of length 1 have sparseness 1.
    """
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    n = x.shape[0]
    norm2 = float(np.linalg.norm(x))
    if n <= 1 or norm2 == 0.0:
        return 1.0
    root = np.sqrt(n)
    value = (n / (n - root)) * (1.0 - float(np.sum(np.abs(x))) / (root * norm2))
    return float(np.clip(value, 0.0, 1.0))


def system_mismatch(x_true: npt.ArrayLike, x: npt.ArrayLike) -> float:
    """
    ||x_true - x||^2 / ||x_true||^2.

    :raises InputError: If x_true is zero or the shapes differ.
    """
    x_true = np.asarray(x_true, dtype=np.float64).reshape(-1)
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.shape != x_true.shape:
        raise InputError(f"Shapes {x_true.shape} and {x.shape} differ.")
    energy = float(x_true @ x_true)
    if energy == 0.0:
        raise InputError("The system mismatch is undefined for a zero ground truth.")
    error = x_true - x
    return float(error @ error) / energy


def misclassification_rate(
    samples: npt.ArrayLike, labels: npt.ArrayLike, w: npt.ArrayLike
) -> float:
    """The fraction of samples a_i with sign(a_i . w) != y_i (a zero score counts as an error)."""
    predictions = np.sign(np.asarray(samples) @ np.asarray(w))
    return float(np.mean(predictions != np.asarray(labels)))


def snr_db(signal: npt.ArrayLike, noise: npt.ArrayLike) -> float:
    """10 log10(||signal||^2 / ||noise||^2)."""
    signal = np.asarray(signal, dtype=np.float64)
    noise = np.asarray(noise, dtype=np.float64)
    return float(10.0 * np.log10(np.sum(signal**2) / np.sum(noise**2)))


def sor_db(signal: npt.ArrayLike, outliers: npt.ArrayLike) -> float:
    """10 log10 of the per-entry signal power over the per-outlier power."""
    signal = np.asarray(signal, dtype=np.float64)
    outliers = np.asarray(outliers, dtype=np.float64)
    support = np.count_nonzero(outliers)
    return float(
        10.0 * np.log10((np.sum(signal**2) / signal.size) / (np.sum(outliers**2) / support))
    )
