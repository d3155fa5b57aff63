import os

import numpy as np
import pytest

from sandwich_sp.grid import make_grid

ACCEPTANCE_LINES = []


def record_criterion(name, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


@pytest.fixture
def criterion():
    """check(name, cond, detail): record a pass/fail line, then assert."""

    def check(name, cond, detail=""):
        record_criterion(name, bool(cond), detail)
        assert cond, f"{name}: {detail}"

    return check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def small_grid():
    return make_grid(100.0, 2000)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=[True, False], ids=["numba", "fallback"])
def numba_flag(request):
    return request.param


@pytest.fixture
def tmp_cwd(tmp_path):
    old = os.getcwd()
    os.chdir(tmp_path)
    yield tmp_path
    os.chdir(old)
