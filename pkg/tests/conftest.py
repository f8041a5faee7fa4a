import math
import sys

import pytest

from gngg import solver


@pytest.fixture(scope="session")
def scan_09pi():
    return solver.scan_roots(0.9 * math.pi)


@pytest.fixture(scope="session")
def scan_pi():
    return solver.scan_roots(math.pi)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.RESULTS:
            terminalreporter.write_line(line)
