"""
This module contains the tests of the experiment specification.
"""

import json
from pathlib import Path

import pytest

from limes_toolkit.bench.constants import (
    AggregateCsvColumn,
    Experiment,
    Method,
    TrialCsvColumn,
)
from limes_toolkit.bench.spec import PRESETS, ExperimentSpec, TrialResult
from limes_toolkit.errors import ConfigError


@pytest.mark.parametrize("experiment", list(Experiment))
def test_preset(experiment: Experiment) -> None:
    spec = ExperimentSpec.preset(experiment)
    for name, value in PRESETS[experiment].items():
        assert getattr(spec, name) == value
    assert list(spec.methods) == Method.for_experiment(experiment)


def test_preset__exp_a_sizes() -> None:
    spec = ExperimentSpec.preset(Experiment.EXP_A)
    assert (spec.m, spec.n, spec.s, spec.snr_db) == (64, 128, 21, 20.0)


def test_from_dict__overrides_and_method_subset() -> None:
    spec = ExperimentSpec.from_dict(
        {"experiment": "exp_b", "trials": 3, "methods": ["huber", "ols"], "outlier_density": 0.1}
    )
    assert spec.trials == 3
    assert spec.methods == (Method.HUBER, Method.OLS)
    assert spec.outlier_count == 13
    assert spec.m == 128


@pytest.mark.parametrize(
    "data",
    [
        {"experiment": "exp_c"},
        {"trials": 2},
        {"experiment": "exp_a", "unknown": 1},
        {"experiment": "exp_a", "methods": ["huber"]},
        {"experiment": "exp_a", "methods": ["fista"]},
        {"experiment": "exp_a", "trials": 0},
        {"experiment": "exp_a", "s": 500},
        {"experiment": "exp_b", "outlier_density": 1.5},
        {"experiment": "exp_a", "alpha_pmc_grid": [0.5, 1.5]},
        {"experiment": "exp_a", "alpha_pmc_grid": []},
        {"experiment": "exp_b", "robust_alpha": 0.0},
        {"experiment": "exp_a", "mu_grid_low": 10.0, "mu_grid_high": 1.0},
        {"experiment": "spcp_demo", "rank": 30},
        {"experiment": "classify_demo", "classify_margin": 1.0},
        {"experiment": "exp_a", "master_seed": -1},
    ],
)
def test_from_dict__invalid(data: dict) -> None:
    with pytest.raises(ConfigError):
        ExperimentSpec.from_dict(data)


def test_to_dict__is_json_and_reloads(tmp_path: Path) -> None:
    spec = ExperimentSpec.preset(Experiment.SPCP_DEMO, trials=2, extras={"note": "demo"})
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec.to_dict()), encoding="utf-8")
    assert ExperimentSpec.from_json(path) == spec


def test_trial_result__columns_and_validity() -> None:
    result = TrialResult(
        experiment="exp_a",
        trial=0,
        method="ols",
        m=4,
        n=8,
        s=2,
        snr_db=20.0,
        sor_db=float("nan"),
        density=0.0,
        mu=float("nan"),
        gamma=float("nan"),
        mismatch=float("nan"),
        sparseness=0.5,
        iterations=0,
    )
    assert not result.valid
    assert list(result.__dataclass_fields__) == TrialCsvColumn.ordered()
    assert AggregateCsvColumn.ordered()[0] == TrialCsvColumn.METHOD.value
