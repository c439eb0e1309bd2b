import numpy as np
import pytest

from wheelbias import presets
from wheelbias.spins import SpinSeries


@pytest.fixture(scope="session")
def session_dist():
    return presets.session_distribution()


@pytest.fixture(scope="session")
def session_series():
    return presets.session_series(seed=0)


@pytest.fixture
def rng():
    return np.random.default_rng(42)


def make_series(outcomes, label="test"):
    return SpinSeries(np.asarray(outcomes, dtype=np.int64), source_label=label)
