"""This module collects constants used in `limes_toolkit.bench`."""

from enum import Enum


class Experiment(str, Enum):
    """
    Enum to represent the experiments of the harness.
    """

    EXP_A = "exp_a"
    """Debiased sparse modeling of an underdetermined system."""

    EXP_B = "exp_b"
    """Robust regression under sparse outliers."""

    SPCP_DEMO = "spcp_demo"
    """Low-rank plus sparse decomposition of a noisy matrix."""

    CLASSIFY_DEMO = "classify_demo"
    """Two-class linear classification of separable data."""


class Method(str, Enum):
    """
    Enum to represent the estimation methods compared by the experiments.
    """

    PMC = "pmc"
    LASSO = "lasso"
    MC = "mc"
    OLS = "ols"
    RIDGE = "ridge"
    SORR = "sorr"
    ORR = "orr"
    HUBER = "huber"
    LAD_RIDGE = "lad_ridge"
    SPCP = "spcp"
    SVD = "svd"
    CLASSIFY = "classify"

    @classmethod
    def for_experiment(cls, experiment: Experiment) -> list["Method"]:
        """The methods available in `experiment`, in their default order."""
        return list(EXPERIMENT_METHODS[experiment])


EXPERIMENT_METHODS = {
    Experiment.EXP_A: (Method.PMC, Method.LASSO, Method.MC, Method.OLS, Method.RIDGE),
    Experiment.EXP_B: (
        Method.SORR,
        Method.ORR,
        Method.HUBER,
        Method.LAD_RIDGE,
        Method.RIDGE,
        Method.OLS,
    ),
    Experiment.SPCP_DEMO: (Method.SPCP, Method.SVD),
    Experiment.CLASSIFY_DEMO: (Method.CLASSIFY,),
}


class TrialCsvColumn(str, Enum):
    """
    Enum to represent the columns of the per-trial CSV file.
    """

    EXPERIMENT = "experiment"
    TRIAL = "trial"
    METHOD = "method"
    M = "m"
    N = "n"
    S = "s"
    SNR_DB = "snr_db"
    SOR_DB = "sor_db"
    DENSITY = "density"
    MU = "mu"
    GAMMA = "gamma"
    MISMATCH = "mismatch"
    SPARSENESS = "sparseness"
    ITERATIONS = "iterations"
    WALLCLOCK_MS = "wallclock_ms"

    @classmethod
    def ordered(cls) -> list[str]:
        return [col.value for col in cls]


class AggregateCsvColumn(str, Enum):
    """
    Enum to represent the columns of the aggregate CSV file.
    """

    METHOD = "method"
    MEAN_MISMATCH = "mean_mismatch"
    STDERR_MISMATCH = "stderr_mismatch"
    N_TRIALS = "n_trials"

    @classmethod
    def ordered(cls) -> list[str]:
        return [col.value for col in cls]


TRIALS_FILE_NAME = "trials.csv"
AGGREGATE_FILE_NAME = "aggregate.csv"
MANIFEST_FILE_NAME = "manifest.json"

SPARSENESS_TOL = 0.01
"""Tuning stops once the solution sparseness is this close to the target."""

MAX_BISECTION_STEPS = 40

FALLBACK_GRID_SIZE = 40

TUNING_BRACKET_LOW_FACTOR = 1e-4
"""The tuning bracket is [factor * ||A^T y||_inf, ||A^T y||_inf]."""

BRACKET_EXPANSIONS = 4
"""How many times the upper end of the tuning bracket may be multiplied by 10."""
