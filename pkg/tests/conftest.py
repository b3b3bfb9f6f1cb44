"""Shared fixtures of the limes_toolkit tests."""

import numpy as np
import pytest


@pytest.fixture
def rng() -> np.random.Generator:
    """A seeded generator, so that property checks are reproducible."""
    return np.random.default_rng(20240301)
