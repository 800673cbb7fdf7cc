import sys

import pytest

from stealthattack.model import DEFAULT_SYSTEM, solve_riccati


@pytest.fixture(scope="session")
def system():
    return DEFAULT_SYSTEM


@pytest.fixture(scope="session")
def steady(system):
    return solve_riccati(system)


def pytest_terminal_summary(terminalreporter):
    gate = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(gate, "GATE_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
