"""
This module contains the tests of the experiment runner, on instances small enough to run in a
few seconds.
"""

from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from limes_toolkit.bench.constants import (
    AGGREGATE_FILE_NAME,
    TRIALS_FILE_NAME,
    AggregateCsvColumn,
    Experiment,
    TrialCsvColumn,
)
from limes_toolkit.bench.runner import (
    aggregate_trials,
    max_workers_from_env,
    run_experiment,
    run_trial,
)
from limes_toolkit.bench.spec import ExperimentSpec
from limes_toolkit.constants import THREADS_ENV_VAR
from limes_toolkit.errors import ConfigError

TINY_EXP_A = ExperimentSpec.preset(
    Experiment.EXP_A,
    m=8,
    n=12,
    s=2,
    trials=2,
    methods=["ols", "ridge", "lasso"],
    mu_grid_size=5,
    solver_max_iter=300,
)

TINY_EXP_B = ExperimentSpec.preset(
    Experiment.EXP_B,
    m=20,
    n=4,
    s=4,
    outlier_density=0.1,
    trials=1,
    methods=["sorr", "huber", "lad_ridge", "ols"],
    mu_grid_size=4,
    small_grid_size=3,
    huber_gamma_grid=[1.0],
    solver_max_iter=300,
)


def test_run_trial__one_row_per_method() -> None:
    results = run_trial(TINY_EXP_A, 0)
    assert [result.method for result in results] == ["ols", "ridge", "lasso"]
    assert all(result.valid for result in results)
    assert all(result.wallclock_ms == 0.0 for result in results)
    assert all(result.snr_db == 20.0 and result.s == 2 for result in results)


def test_run_trial__exp_b() -> None:
    results = run_trial(TINY_EXP_B, 0)
    assert [result.method for result in results] == ["sorr", "huber", "lad_ridge", "ols"]
    assert all(result.valid for result in results)
    assert results[0].gamma > 0 and results[0].iterations > 0


def test_run_experiment__writes_csv_files(tmp_path: Path) -> None:
    outcome = run_experiment(TINY_EXP_A, tmp_path, max_workers=1)
    trials = pd.read_csv(tmp_path / TRIALS_FILE_NAME)
    aggregate = pd.read_csv(tmp_path / AGGREGATE_FILE_NAME)
    assert list(trials.columns) == TrialCsvColumn.ordered()
    assert list(aggregate.columns) == AggregateCsvColumn.ordered()
    assert len(trials) == 6
    assert trials[TrialCsvColumn.TRIAL.value].tolist() == [0, 0, 0, 1, 1, 1]
    assert aggregate[AggregateCsvColumn.METHOD.value].tolist() == ["ols", "ridge", "lasso"]
    assert aggregate[AggregateCsvColumn.N_TRIALS.value].tolist() == [2, 2, 2]
    assert len(outcome.trials) == 6


def test_run_experiment__reruns_are_byte_identical(tmp_path: Path) -> None:
    run_experiment(TINY_EXP_A, tmp_path / "first", max_workers=1)
    run_experiment(TINY_EXP_A, tmp_path / "second", max_workers=2)
    for name in (TRIALS_FILE_NAME, AGGREGATE_FILE_NAME):
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()


def test_run_experiment__wallclock_recorded_on_request() -> None:
    spec = ExperimentSpec.preset(
        Experiment.EXP_A, m=6, n=8, s=2, methods=["ols"], record_wallclock=True
    )
    outcome = run_experiment(spec, max_workers=1)
    assert (outcome.trials[TrialCsvColumn.WALLCLOCK_MS.value] > 0).all()


def test_run_experiment__spcp_beats_truncated_svd_on_outliers() -> None:
    spec = ExperimentSpec.preset(
        Experiment.SPCP_DEMO,
        m=20,
        n=20,
        rank=2,
        sparse_fraction=0.05,
        spcp_mu_grid=[0.3, 1.0],
        solver_max_iter=2000,
    )
    aggregate = run_experiment(spec, max_workers=1).aggregate.set_index(
        AggregateCsvColumn.METHOD.value
    )
    mismatch = aggregate[AggregateCsvColumn.MEAN_MISMATCH.value]
    assert np.isfinite(mismatch["spcp"])
    assert mismatch["spcp"] < mismatch["svd"]


def test_run_experiment__classify_separable() -> None:
    spec = ExperimentSpec.preset(Experiment.CLASSIFY_DEMO, m=200, n=5, s=5)
    trials = run_experiment(spec, max_workers=1).trials
    assert trials[TrialCsvColumn.MISMATCH.value].iloc[0] <= 0.05


def test_run_trial__failure_is_recorded_as_nan(caplog: pytest.LogCaptureFixture) -> None:
    # the mismatch is undefined for an all-zero ground truth
    spec = ExperimentSpec.preset(Experiment.EXP_A, m=6, n=8, s=0, methods=["ols"])
    results = run_trial(spec, 0)
    assert not results[0].valid
    assert "failed" in caplog.text


def test_aggregate_trials__skips_failed_trials() -> None:
    trials = pd.DataFrame(
        {
            TrialCsvColumn.METHOD.value: ["b", "a", "b", "a"],
            TrialCsvColumn.MISMATCH.value: [1.0, 2.0, 3.0, float("nan")],
        }
    )
    aggregate = aggregate_trials(trials)
    assert aggregate[AggregateCsvColumn.METHOD.value].tolist() == ["b", "a"]
    assert aggregate[AggregateCsvColumn.MEAN_MISMATCH.value].tolist() == [2.0, 2.0]
    assert aggregate[AggregateCsvColumn.N_TRIALS.value].tolist() == [2, 1]
    assert np.isclose(aggregate[AggregateCsvColumn.STDERR_MISMATCH.value].iloc[0], 1.0)


def test_max_workers_from_env(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv(THREADS_ENV_VAR, "3")
    assert max_workers_from_env() == 3
    monkeypatch.delenv(THREADS_ENV_VAR)
    assert max_workers_from_env() >= 1


@pytest.mark.parametrize("value", ["0", "-2", "many"])
def test_max_workers_from_env__invalid(monkeypatch: pytest.MonkeyPatch, value: str) -> None:
    monkeypatch.setenv(THREADS_ENV_VAR, value)
    with pytest.raises(ConfigError):
        max_workers_from_env()


def _mean_mismatch(spec: ExperimentSpec) -> pd.Series:
    aggregate = run_experiment(spec).aggregate.set_index(AggregateCsvColumn.METHOD.value)
    return aggregate[AggregateCsvColumn.MEAN_MISMATCH.value]


@pytest.mark.slow
def test_exp_a__pmc_beats_lasso() -> None:
    mismatch = _mean_mismatch(
        ExperimentSpec.preset(Experiment.EXP_A, trials=20, methods=["pmc", "lasso"])
    )
    assert mismatch["pmc"] < mismatch["lasso"]


@pytest.mark.slow
def test_exp_b__sorr_beats_robust_baselines() -> None:
    mismatch = _mean_mismatch(
        ExperimentSpec.preset(
            Experiment.EXP_B, trials=20, methods=["sorr", "orr", "huber", "lad_ridge"]
        )
    )
    assert mismatch["sorr"] < mismatch["orr"]
    assert mismatch["sorr"] < mismatch["huber"]
    assert mismatch["sorr"] < mismatch["lad_ridge"]


@pytest.mark.slow
def test_exp_b__sorr_improves_as_outliers_grow() -> None:
    strong = _mean_mismatch(
        ExperimentSpec.preset(Experiment.EXP_B, trials=20, sor_db=-40.0, methods=["sorr"])
    )
    mild = _mean_mismatch(
        ExperimentSpec.preset(Experiment.EXP_B, trials=20, sor_db=-12.0, methods=["sorr"])
    )
    assert strong["sorr"] <= mild["sorr"]
