import sys
import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from selfrecip.grid import default_grid, make_radial_grid

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def grid():
    return default_grid()


@pytest.fixture(scope="session")
def small_grid():
    # cheap grid for shape and bookkeeping tests
    return make_radial_grid(1e-6, 1e4, 512)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
