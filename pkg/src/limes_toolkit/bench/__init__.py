"""This module defines the public interface of the experiment harness."""

from limes_toolkit.bench.constants import Experiment, Method
from limes_toolkit.bench.runner import ExperimentOutcome, run_experiment, run_trial
from limes_toolkit.bench.spec import ExperimentSpec, TrialResult
