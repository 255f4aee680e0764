"""Shared fixtures."""

import numpy as np
import pytest

from ergavg.core.gridfn import GridFunction


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator, fresh for every test."""
    return np.random.default_rng(20240229)


@pytest.fixture
def random_pair(rng):
    """Two short complex inputs with overlapping supports."""
    f = GridFunction(rng.standard_normal(12) + 1j * rng.standard_normal(12), -3)
    g = GridFunction(rng.standard_normal(40) + 1j * rng.standard_normal(40), -20)
    return f, g
