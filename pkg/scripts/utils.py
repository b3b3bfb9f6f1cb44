import argparse
from pathlib import Path


def parse_args() -> argparse.Namespace:
    """Parse command-line arguments."""
    parser = argparse.ArgumentParser(
        description="Plot the results of a limes experiment run."
    )
    parser.add_argument(
        "run_dir",
        type=Path,
        help="Path to the output directory of a `limes exp-a|exp-b|spcp|classify` run.",
    )
    parser.add_argument(
        "--log-scale",
        action="store_true",
        help="Use a logarithmic scale for the mismatch axis.",
    )
    return parser.parse_args()
