"""Shared fixtures: tiny synthetic tables with the standard schema."""

import numpy as np
import pytest

from surprise_bo.dataset import Dataset, meltpool_schema


@pytest.fixture
def schema():
    return meltpool_schema("depth")


def random_dataset(n, seed, target="depth"):
    """Continuous random table; duplicate-free with probability 1."""
    rng = np.random.default_rng(seed)
    rows = rng.normal(size=(n, 6)) * rng.uniform(0.5, 3.0, size=6) + rng.normal(
        size=6
    )
    targets = rng.normal(size=n)
    return Dataset(schema=meltpool_schema(target), rows=rows, targets=targets)


@pytest.fixture
def small_dataset():
    return random_dataset(40, seed=123)
