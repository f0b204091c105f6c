import numpy as np
import pytest

from kwlab.forms import calibrate
from kwlab.quadrature import QuadratureSpec

_ACCEPTANCE_LINES = []


def record_acceptance(name: str, passed: bool, detail: str = ""):
    _ACCEPTANCE_LINES.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE_LINES:
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] {name}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def conv():
    return calibrate()


@pytest.fixture(scope="session")
def quad_spec():
    return QuadratureSpec()


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260808)
