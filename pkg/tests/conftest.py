"""
Shared fixtures and the slow-test switch
"""

import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

DATA_DIR = ROOT / "data"


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow acceptance tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running acceptance test, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    """Seeded generator so every test is reproducible"""
    return np.random.default_rng(20160601)


def random_spd(rng, dim, scale=1.0):
    """Well-conditioned random symmetric positive-definite matrix"""
    a = rng.normal(size=(dim, dim))
    return scale * (a @ a.T / dim + np.eye(dim))


@pytest.fixture
def spd_factory(rng):
    return lambda dim, scale=1.0: random_spd(rng, dim, scale)


def dataset_path(name):
    path = DATA_DIR / f"{name}.csv"
    if not path.exists():
        pytest.skip(f"{path} not present")
    return path


@pytest.fixture
def iris_path():
    return dataset_path("iris")


@pytest.fixture
def wine_path():
    return dataset_path("wine")
