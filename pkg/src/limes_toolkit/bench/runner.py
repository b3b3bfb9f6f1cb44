"""
This module runs the experiments: it generates the data of every trial, fits every method,
records one `TrialResult` per (trial, method) and aggregates them per method.
"""

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable

import numpy as np
import pandas as pd
import scipy.linalg

from limes_toolkit.bench import baselines
from limes_toolkit.bench.constants import (
    AGGREGATE_FILE_NAME,
    TRIALS_FILE_NAME,
    AggregateCsvColumn,
    Experiment,
    Method,
    TrialCsvColumn,
)
from limes_toolkit.bench.data import (
    gen_classify_model,
    gen_outlier_model,
    gen_sparse_model,
    gen_spcp_model,
    trial_rng,
)
from limes_toolkit.bench.metrics import (
    hoyer_sparseness,
    misclassification_rate,
    system_mismatch,
)
from limes_toolkit.bench.spec import ExperimentSpec, TrialResult
from limes_toolkit.bench.tuning import lasso_bracket, tune_mu_to_sparseness
from limes_toolkit.constants import CSV_FLOAT_FORMAT, THREADS_ENV_VAR
from limes_toolkit.errors import ConfigError, LimesError
from limes_toolkit.linop.spectral import lambda_min_pp_gram
from limes_toolkit.model.applications import (
    make_classify,
    make_mc,
    make_orr,
    make_pmc,
    make_sorr,
    make_spcp,
    split_spcp,
)
from limes_toolkit.model.convexity import convexity_bound_classify
from limes_toolkit.solvers.config import SolverConfig, SolveResult
from limes_toolkit.solvers.ista import ista
from limes_toolkit.solvers.primal_dual import primal_dual_debiasing
from limes_toolkit.solvers.prox_gradient import proximal_debiasing_gradient
from limes_toolkit.types import FloatArray

LOG = logging.getLogger(__name__)

NAN = float("nan")


@dataclass(frozen=True)
class Fit:
    """The estimate of one method on one trial, with the parameters it was selected at."""

    mismatch: float
    sparseness: float
    mu: float = NAN
    gamma: float = NAN
    iterations: int = 0


@dataclass(frozen=True, eq=False)
class ExperimentOutcome:
    """The per-trial table and the per-method aggregate of a run."""

    trials: pd.DataFrame
    aggregate: pd.DataFrame


def _solver_config(spec: ExperimentSpec, allow_nonconvex: bool = False) -> SolverConfig:
    return SolverConfig(
        max_iter=spec.solver_max_iter,
        rel_tol=spec.solver_rel_tol,
        record_trace=False,
        allow_nonconvex=allow_nonconvex,
    )


def _mu_grid(spec: ExperimentSpec) -> FloatArray:
    return np.geomspace(spec.mu_grid_low, spec.mu_grid_high, spec.mu_grid_size)


def _lambda_grid(spec: ExperimentSpec, size: int) -> FloatArray:
    return np.geomspace(spec.lambda_grid_low, spec.lambda_grid_high, size)


def _best(fits: list[Fit]) -> Fit:
    """The fit with the smallest mismatch (the oracle choice of the parameters)."""
    valid = [fit for fit in fits if np.isfinite(fit.mismatch)]
    if not valid:
        raise ConfigError("No parameter of the grid produced a valid estimate.")
    return min(valid, key=lambda fit: fit.mismatch)


def _lambda_max_exact(a: FloatArray) -> float:
    return float(scipy.linalg.svdvals(a)[0] ** 2)


# Experiment A: sparse modeling of an underdetermined system


def _fit_sparse_tuned(
    x_true: FloatArray,
    a: FloatArray,
    y: FloatArray,
    solve: Callable[[float], SolveResult],
    gamma_of_mu: Callable[[float], float],
) -> Fit:
    outcome = tune_mu_to_sparseness(solve, hoyer_sparseness(x_true), lasso_bracket(a, y))
    return Fit(
        mismatch=system_mismatch(x_true, outcome.result.x),
        sparseness=outcome.sparseness,
        mu=outcome.mu,
        gamma=gamma_of_mu(outcome.mu),
        iterations=outcome.result.iterations,
    )


def _fit_exp_a(spec: ExperimentSpec, trial: int, method: Method) -> Fit:
    data = gen_sparse_model(spec, trial)
    a, y, x_true = data.a, data.y, data.x_true
    config = _solver_config(spec)
    match method:
        case Method.OLS:
            x = baselines.baseline_ols(a, y)
            return Fit(system_mismatch(x_true, x), hoyer_sparseness(x))
        case Method.RIDGE:
            fits = []
            for lam in _lambda_grid(spec, spec.mu_grid_size):
                x = baselines.baseline_ridge(a, y, lam)
                fits.append(Fit(system_mismatch(x_true, x), hoyer_sparseness(x), mu=lam))
            return _best(fits)
        case Method.LASSO:
            return _fit_sparse_tuned(
                x_true, a, y, lambda mu: ista(a, y, mu, config), lambda mu: NAN
            )
        case Method.MC:
            lambda_min = lambda_min_pp_gram(a)
            nonconvex = _solver_config(spec, allow_nonconvex=True)
            return _fit_sparse_tuned(
                x_true,
                a,
                y,
                lambda mu: proximal_debiasing_gradient(
                    make_mc(a, y, mu, mu / lambda_min), nonconvex
                ),
                lambda mu: mu / lambda_min,
            )
        case Method.PMC:
            lambda_min = lambda_min_pp_gram(a)
            fits = []
            for alpha in spec.alpha_pmc_grid:

                def gamma_of_mu(mu: float, alpha: float = alpha) -> float:
                    return mu / (alpha * lambda_min)

                def solve(mu: float, gamma_of_mu=gamma_of_mu) -> SolveResult:
                    return proximal_debiasing_gradient(
                        make_pmc(a, y, mu, gamma_of_mu(mu)), config
                    )

                try:
                    fits.append(_fit_sparse_tuned(x_true, a, y, solve, gamma_of_mu))
                except LimesError as error:
                    LOG.debug("PMC tuning failed for alpha=%.2f: %s", alpha, error)
            return _best(fits)
    raise ConfigError(f"Method {method.value} is not part of {Experiment.EXP_A.value}.")


# Experiment B: regression under sparse outliers


def _fit_exp_b(spec: ExperimentSpec, trial: int, method: Method) -> Fit:
    data = gen_outlier_model(spec, trial)
    a, y, x_true = data.a, data.y, data.x_true
    n = a.shape[1]
    config = _solver_config(spec)

    def fit(x: FloatArray, **params: float) -> Fit:
        return Fit(system_mismatch(x_true, x), hoyer_sparseness(x), **params)

    match method:
        case Method.OLS:
            return fit(baselines.baseline_ols(a, y))
        case Method.RIDGE:
            return _best(
                [
                    fit(baselines.baseline_ridge(a, y, lam), mu=lam)
                    for lam in _lambda_grid(spec, spec.mu_grid_size)
                ]
            )
        case Method.SORR | Method.ORR:
            sigma_x = 1.0
            sigma_eps = float(np.sqrt(np.mean(data.noise**2)))
            lambda_max = _lambda_max_exact(a)
            if method == Method.SORR:
                scale = sigma_eps**2 + sigma_x**2 * lambda_max
            else:
                scale = lambda_max
            fits = []
            x0 = v0 = None
            for mu in _mu_grid(spec):
                gamma = mu * scale / spec.robust_alpha
                if method == Method.SORR:
                    problem = make_sorr(a, y, sigma_x, sigma_eps, mu, gamma)
                else:
                    problem = make_orr(a, y, mu, gamma)
                result = primal_dual_debiasing(problem, config, x0, v0)
                x0, v0 = result.x, result.v
                fits.append(fit(result.x[:n], mu=mu, gamma=gamma, iterations=result.iterations))
            return _best(fits)
        case Method.HUBER:
            fits = []
            for gamma in spec.huber_gamma_grid:
                x0 = None
                for lam in _lambda_grid(spec, spec.small_grid_size):
                    result = baselines.baseline_huber(a, y, gamma, lam, config, x0)
                    x0 = result.x
                    fits.append(fit(result.x, mu=lam, gamma=gamma, iterations=result.iterations))
            return _best(fits)
        case Method.LAD_RIDGE:
            fits = []
            x0 = v0 = None
            for lam in _lambda_grid(spec, spec.small_grid_size):
                result = baselines.baseline_lad_ridge(a, y, lam, config, x0, v0)
                x0, v0 = result.x, result.v
                fits.append(fit(result.x, mu=lam, iterations=result.iterations))
            return _best(fits)
    raise ConfigError(f"Method {method.value} is not part of {Experiment.EXP_B.value}.")


# Demonstrations: SPCP and classification


def _fit_spcp(spec: ExperimentSpec, trial: int, method: Method) -> Fit:
    data = gen_spcp_model(
        spec.n,
        spec.m,
        spec.rank,
        spec.sparse_fraction,
        spec.noise_sigma,
        trial_rng(spec.master_seed, trial),
        spec.sparse_scale,
    )
    match method:
        case Method.SVD:
            u, sigma, vt = scipy.linalg.svd(data.y, full_matrices=False)
            low_rank = (u[:, : spec.rank] * sigma[: spec.rank]) @ vt[: spec.rank]
            return Fit(system_mismatch(data.low_rank, low_rank), NAN)
        case Method.SPCP:
            config = _solver_config(spec)
            fits = []
            for mu_l in spec.spcp_mu_grid:
                for mu_s in spec.spcp_mu_grid:
                    gamma = (mu_l + mu_s) / (4.0 * spec.spcp_alpha)
                    problem = make_spcp(data.y, mu_l, mu_s, gamma)
                    result = proximal_debiasing_gradient(problem, config)
                    low_rank, sparse = split_spcp(problem, result.x)
                    fits.append(
                        Fit(
                            system_mismatch(data.low_rank, low_rank),
                            hoyer_sparseness(sparse),
                            mu=mu_l,
                            gamma=gamma,
                            iterations=result.iterations,
                        )
                    )
                    LOG.debug("SPCP mu_L=%.3g mu_S=%.3g: %.4e", mu_l, mu_s, fits[-1].mismatch)
            return _best(fits)
    raise ConfigError(f"Method {method.value} is not part of {Experiment.SPCP_DEMO.value}.")


def _fit_classify(spec: ExperimentSpec, trial: int, method: Method) -> Fit:
    if method != Method.CLASSIFY:
        raise ConfigError(
            f"Method {method.value} is not part of {Experiment.CLASSIFY_DEMO.value}."
        )
    data = gen_classify_model(spec, trial)
    gamma = spec.classify_gamma
    mu = spec.classify_alpha * convexity_bound_classify(data.samples, gamma)
    problem = make_classify(data.samples, data.labels, mu, gamma)
    result = primal_dual_debiasing(problem, _solver_config(spec))
    return Fit(
        misclassification_rate(data.samples, data.labels, result.x),
        hoyer_sparseness(result.x),
        mu=mu,
        gamma=gamma,
        iterations=result.iterations,
    )


FITTERS: dict[Experiment, Callable[[ExperimentSpec, int, Method], Fit]] = {
    Experiment.EXP_A: _fit_exp_a,
    Experiment.EXP_B: _fit_exp_b,
    Experiment.SPCP_DEMO: _fit_spcp,
    Experiment.CLASSIFY_DEMO: _fit_classify,
}


def _trial_fields(spec: ExperimentSpec) -> dict[str, float | int]:
    match spec.experiment:
        case Experiment.EXP_A:
            return {"s": spec.s, "snr_db": spec.snr_db, "sor_db": NAN, "density": 0.0}
        case Experiment.EXP_B:
            return {
                "s": spec.n,
                "snr_db": spec.snr_db,
                "sor_db": spec.sor_db,
                "density": spec.outlier_density,
            }
        case Experiment.SPCP_DEMO:
            return {"s": spec.rank, "snr_db": NAN, "sor_db": NAN, "density": spec.sparse_fraction}
    return {"s": spec.n, "snr_db": NAN, "sor_db": NAN, "density": 0.0}


def run_trial(spec: ExperimentSpec, trial: int) -> list[TrialResult]:
    """
    Fits every method of `spec` on one trial. A method that fails is recorded with a NaN
    mismatch and sparseness.
    """
    fitter = FITTERS[spec.experiment]
    results = []
    for method in spec.methods:
        start = time.perf_counter()
        try:
            fit = fitter(spec, trial, method)
        except (LimesError, ArithmeticError) as error:
            LOG.warning("Trial %d, method %s failed: %s", trial, method.value, error)
            fit = Fit(mismatch=NAN, sparseness=NAN)
        elapsed_ms = (time.perf_counter() - start) * 1e3 if spec.record_wallclock else 0.0
        results.append(
            TrialResult(
                experiment=spec.experiment.value,
                trial=trial,
                method=method.value,
                m=spec.m,
                n=spec.n,
                mu=fit.mu,
                gamma=fit.gamma,
                mismatch=fit.mismatch,
                sparseness=fit.sparseness,
                iterations=fit.iterations,
                wallclock_ms=elapsed_ms,
                **_trial_fields(spec),
            )
        )
    LOG.debug("Trial %d done.", trial)
    return results


def max_workers_from_env() -> int:
    """
    The number of worker threads: the value of LIMES_THREADS if set, else the CPU count.

    :raises ConfigError: If LIMES_THREADS is not a positive integer.
    """
    value = os.environ.get(THREADS_ENV_VAR)
    if value is None:
        return os.cpu_count() or 1
    try:
        workers = int(value)
    except ValueError as error:
        raise ConfigError(f"{THREADS_ENV_VAR} must be an integer, got {value!r}.") from error
    if workers < 1:
        raise ConfigError(f"{THREADS_ENV_VAR} must be positive, got {workers}.")
    return workers


def aggregate_trials(trials: pd.DataFrame) -> pd.DataFrame:
    """
    The mean and standard error of the mismatch per method, over the valid trials, in the
    order in which the methods first appear.
    """
    grouped = trials.groupby(TrialCsvColumn.METHOD.value, sort=False)[
        TrialCsvColumn.MISMATCH.value
    ]
    aggregate = pd.DataFrame(
        {
            AggregateCsvColumn.MEAN_MISMATCH.value: grouped.mean(),
            AggregateCsvColumn.STDERR_MISMATCH.value: grouped.sem(),
            AggregateCsvColumn.N_TRIALS.value: grouped.count(),
        }
    )
    aggregate.index.name = AggregateCsvColumn.METHOD.value
    return aggregate.reset_index()[AggregateCsvColumn.ordered()]


def run_experiment(
    spec: ExperimentSpec, out_dir: Path | None = None, max_workers: int | None = None
) -> ExperimentOutcome:
    """
    Runs every trial of `spec` (concurrently, each trial on its own random stream) and
    aggregates the results.

    :param spec: The experiment to run.
    :param out_dir: If given, `trials.csv` and `aggregate.csv` are written there.
    :param max_workers: The number of threads; defaults to `max_workers_from_env()`.
    :return: The per-trial table, ordered by trial then method, and the aggregate.
    """
    workers = max_workers or max_workers_from_env()
    LOG.info(
        "Running %s: %d trials, methods %s, %d threads.",
        spec.experiment.value,
        spec.trials,
        [method.value for method in spec.methods],
        workers,
    )
    with ThreadPoolExecutor(max_workers=workers) as pool:
        per_trial = list(pool.map(lambda trial: run_trial(spec, trial), range(spec.trials)))
    rows = [asdict(result) for results in per_trial for result in results]
    trials = pd.DataFrame(rows, columns=TrialCsvColumn.ordered())
    aggregate = aggregate_trials(trials)
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_csv(trials, out_dir / TRIALS_FILE_NAME)
        write_csv(aggregate, out_dir / AGGREGATE_FILE_NAME)
    return ExperimentOutcome(trials=trials, aggregate=aggregate)


def write_csv(frame: pd.DataFrame, path: Path) -> None:
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
