import numpy as np
import pytest

from zenoccp.model import CcpInstance

ACCEPTANCE_LINES = []


@pytest.fixture
def experiment_instance():
    return CcpInstance(60, 3, 2, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(20261017)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
