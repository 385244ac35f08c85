import os
from pathlib import Path

import numpy as np
import pytest

from src.models.matrices import ObservationMatrix
from src.utils.constants import DATA_DIR_ENV
from src.utils.logger import logger


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False,
                     help="run tests marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def isolated_logs(tmp_path):
    """Point the shared logger at this test's directory and captured stdout"""
    logger.configure(tmp_path / 'logs')


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_observations():
    """4 items x 3 users"""
    return ObservationMatrix.from_positives(4, 3, [(0, 0), (1, 0), (2, 0), (0, 1), (3, 1), (1, 2)])


RATINGS_LINES = [
    "196\t242\t3\t881250949",
    "186\t302\t3\t891717742",
    "22\t377\t1\t878887116",
    "244\t51\t2\t880606923",
    "166\t346\t1\t886397596",
    "298\t474\t4\t884182806",
    "115\t265\t2\t881171488",
    "253\t465\t5\t891628467",
    "305\t451\t3\t886324817",
    "6\t86\t3\t883603013",
    "196\t51\t5\t881250950",
    "196\t302\t4\t881250951",
    "186\t242\t5\t891717743",
]


@pytest.fixture
def ratings_file(tmp_path):
    path = tmp_path / 'u.data'
    path.write_text("\n".join(RATINGS_LINES) + "\n")
    return path


@pytest.fixture
def synthetic_ratings(tmp_path):
    """Dense-enough synthetic tab file for end-to-end runs"""
    from populate_test_data import write_synthetic_ratings
    return write_synthetic_ratings(str(tmp_path / 'synthetic' / 'u.data'), users=30, items=40, seed=3)


@pytest.fixture
def ml100k_path():
    data_dir = os.environ.get(DATA_DIR_ENV)
    path = Path(data_dir) / 'ml-100k' / 'u.data' if data_dir else None
    if path is None or not path.exists():
        pytest.skip(f"set {DATA_DIR_ENV} to a directory containing ml-100k/u.data")
    return path
