import json
from pathlib import Path

import numpy as np
import pytest

from qclab.field import DiskGrid

ORACLES = json.loads((Path(__file__).parent / "oracles" / "frozen.json").read_text())

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_LINES = {}


@pytest.fixture(scope="session")
def oracle():
    return ORACLES


@pytest.fixture(scope="session")
def grid65():
    return DiskGrid(n=65)


@pytest.fixture(scope="session")
def grid129():
    return DiskGrid(n=129)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
