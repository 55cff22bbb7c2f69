import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from syncwalk import MappingLaw, MappingTable, StochasticMatrix  # noqa: E402

# three states on a cycle: a step forward w.p. 2/3, back w.p. 1/3
SKEW3_ROWS = [[0, "2/3", "1/3"], ["1/3", 0, "2/3"], ["2/3", "1/3", 0]]

# four maps on three states, by 1-based images
SIGMA_LABELS = {1: (3, 3, 1), 2: (2, 1, 2), 3: (2, 3, 1), 4: (3, 1, 2)}


@pytest.fixture
def skew3():
    return StochasticMatrix(SKEW3_ROWS)


@pytest.fixture
def sigmas():
    return {k: MappingTable.from_labels(v) for k, v in SIGMA_LABELS.items()}


@pytest.fixture
def mu1(sigmas):
    return MappingLaw({sigmas[1]: "1/3", sigmas[2]: "1/3", sigmas[3]: "1/3"})


@pytest.fixture
def mu2(sigmas):
    return MappingLaw({sigmas[3]: "2/3", sigmas[4]: "1/3"})


def two_state(p):
    return StochasticMatrix([[p, 1 - p], [1 - p, p]])


_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
