# tests/conftest.py
import sys
from pathlib import Path

import numpy as np
import pytest

# Add repo root to path so that ``src.*`` imports resolve
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.lattice.spaces import AtomicSpace
from src.models import SearchConfig


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def small_cfg():
    """A cheap, fully seeded search configuration."""
    return SearchConfig(seed=1, restarts=2, iterations=40, trials=60, workers=1)


@pytest.fixture
def unit4():
    return AtomicSpace.unit(4)


@pytest.fixture
def weighted3():
    return AtomicSpace((1.0, 4.0, 0.5))
