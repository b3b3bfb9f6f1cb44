"""This script plots the mean mismatch per method of an experiment run, with error bars."""

import json
import logging
from pathlib import Path

import pandas as pd
import plotly.graph_objects as go
from utils import parse_args

from limes_toolkit.bench.constants import (
    AGGREGATE_FILE_NAME,
    MANIFEST_FILE_NAME,
    TRIALS_FILE_NAME,
    AggregateCsvColumn,
    TrialCsvColumn,
)

LOG = logging.getLogger(__name__)


def plot_aggregate(aggregate: pd.DataFrame, title: str, log_scale: bool) -> go.Figure:
    """
    Bar chart of the mean mismatch of each method, with the standard error as error bar.

    :param aggregate: The content of aggregate.csv.
    :param title: The figure title.
    :param log_scale: Whether the mismatch axis is logarithmic.
    :return: The figure.
    """
    fig = go.Figure()
    fig.add_trace(
        go.Bar(
            x=aggregate[AggregateCsvColumn.METHOD.value],
            y=aggregate[AggregateCsvColumn.MEAN_MISMATCH.value],
            error_y={
                "type": "data",
                "array": aggregate[AggregateCsvColumn.STDERR_MISMATCH.value],
            },
            text=aggregate[AggregateCsvColumn.N_TRIALS.value].map(lambda n: f"{n} trials"),
        )
    )
    fig.update_layout(
        title=title,
        xaxis_title="Method",
        yaxis_title="Mismatch",
        yaxis_type="log" if log_scale else "linear",
    )
    return fig


def plot_trials(trials: pd.DataFrame, title: str, log_scale: bool) -> go.Figure:
    """Scatter of the mismatch of every trial against its sparseness, one trace per method."""
    fig = go.Figure()
    for method, group in trials.groupby(TrialCsvColumn.METHOD.value, sort=False):
        fig.add_trace(
            go.Scatter(
                x=group[TrialCsvColumn.SPARSENESS.value],
                y=group[TrialCsvColumn.MISMATCH.value],
                mode="markers",
                name=str(method),
            )
        )
    fig.update_layout(
        title=title,
        xaxis_title="Hoyer sparseness",
        yaxis_title="Mismatch",
        yaxis_type="log" if log_scale else "linear",
    )
    return fig


def plot_experiment(run_dir: Path, log_scale: bool) -> None:
    aggregate = pd.read_csv(run_dir / AGGREGATE_FILE_NAME)
    trials = pd.read_csv(run_dir / TRIALS_FILE_NAME)
    title = run_dir.name
    manifest_path = run_dir / MANIFEST_FILE_NAME
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        title = f"{manifest['command']} (limes_toolkit {manifest['version']})"

    for name, fig in (
        ("aggregate.html", plot_aggregate(aggregate, title, log_scale)),
        ("trials.html", plot_trials(trials, title, log_scale)),
    ):
        fig_path = run_dir / name
        fig.write_html(fig_path)
        LOG.info("Saved %s", fig_path)


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO)
    args = parse_args()
    plot_experiment(args.run_dir, args.log_scale)
