import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from symatch.registry import get_code  # noqa: E402

CRITERIA: dict = {}


@pytest.fixture(scope="session")
def gross():
    return get_code("gross")


@pytest.fixture(scope="session")
def toric4():
    return get_code("TC4")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[num])
