"""
This module contains the tests of the synthetic data generators.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from limes_toolkit.bench.constants import Experiment
from limes_toolkit.bench.data import (
    gen_classify_model,
    gen_outlier_model,
    gen_sparse_model,
    gen_spcp_model,
)
from limes_toolkit.bench.metrics import snr_db, sor_db
from limes_toolkit.bench.spec import ExperimentSpec
from limes_toolkit.errors import InputError

SPARSE_SPEC = ExperimentSpec.preset(Experiment.EXP_A, m=16, n=32, s=4, snr_db=15.0)
OUTLIER_SPEC = ExperimentSpec.preset(
    Experiment.EXP_B, m=40, n=10, s=10, outlier_density=0.1, snr_db=10.0, sor_db=-20.0
)


def test_gen_sparse_model() -> None:
    data = gen_sparse_model(SPARSE_SPEC, 0)
    assert data.a.shape == (16, 32)
    assert np.count_nonzero(data.x_true) == 4
    assert_allclose(data.y, data.a @ data.x_true + data.noise)
    assert np.isclose(snr_db(data.a @ data.x_true, data.noise), 15.0)


def test_gen_sparse_model__deterministic_per_trial() -> None:
    first = gen_sparse_model(SPARSE_SPEC, 3)
    again = gen_sparse_model(SPARSE_SPEC, 3)
    other = gen_sparse_model(SPARSE_SPEC, 4)
    assert_array_equal(first.a, again.a)
    assert_array_equal(first.y, again.y)
    assert not np.array_equal(first.a, other.a)


def test_gen_sparse_model__seed_changes_data() -> None:
    shifted = ExperimentSpec.preset(Experiment.EXP_A, m=16, n=32, s=4, master_seed=1)
    assert not np.array_equal(gen_sparse_model(SPARSE_SPEC, 0).a, gen_sparse_model(shifted, 0).a)


def test_gen_outlier_model() -> None:
    data = gen_outlier_model(OUTLIER_SPEC, 0)
    signal = data.a @ data.x_true
    assert np.count_nonzero(data.outliers) == 4
    assert np.isclose(snr_db(signal, data.noise), 10.0)
    assert np.isclose(sor_db(signal, data.outliers), -20.0)
    assert_allclose(data.y, signal + data.noise + data.outliers)


def test_gen_outlier_model__without_outliers() -> None:
    spec = ExperimentSpec.preset(Experiment.EXP_B, m=20, n=5, s=5, outlier_density=0.0)
    assert not np.any(gen_outlier_model(spec, 0).outliers)


def test_gen_spcp_model() -> None:
    data = gen_spcp_model(10, 8, 2, 0.1, 0.01, seed=7)
    assert data.y.shape == (10, 8)
    assert np.linalg.matrix_rank(data.low_rank) == 2
    assert np.count_nonzero(data.sparse) == 8
    assert_allclose(data.y, data.low_rank + data.sparse + data.noise)


def test_gen_spcp_model__invalid_rank() -> None:
    with pytest.raises(InputError):
        gen_spcp_model(4, 3, 4, 0.1, 0.01, seed=0)


def test_gen_classify_model() -> None:
    spec = ExperimentSpec.preset(Experiment.CLASSIFY_DEMO, m=50, n=4, s=4, classify_margin=0.3)
    data = gen_classify_model(spec, 0)
    assert data.samples.shape == (50, 4)
    assert_allclose(np.linalg.norm(data.samples, axis=1), 1.0)
    assert np.isclose(np.linalg.norm(data.w_true), 1.0)
    scores = data.samples @ data.w_true
    assert np.all(np.abs(scores) >= 0.3)
    assert_array_equal(data.labels, np.sign(scores))
