from pathlib import Path

import numpy as np
import pytest

from dmapx.dataset import PointCloud

DATA = Path(__file__).parent / "data"


@pytest.fixture
def iris_path():
    return DATA / "iris.csv"


@pytest.fixture
def random_cloud():
    def make(n=50, d=2, seed=0, scale=1.0):
        rng = np.random.default_rng(seed)
        return PointCloud(scale * rng.normal(size=(n, d)))

    return make


# one PASS/FAIL line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
