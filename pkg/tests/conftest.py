import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from forge import division_algebra as da

settings.register_profile("forge", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("forge")


@pytest.fixture(scope="session")
def ctx521():
    """p=5, d=2, e=1, f0=1 with four digits of precision."""
    return da.make_context(5, 2, e=1, f0=1, K=4)


@pytest.fixture(scope="session")
def ctx531():
    return da.make_context(5, 3, e=1, f0=1, K=3)


@pytest.fixture(scope="session")
def ctx524():
    """Cyclotomic base field Q_5(zeta_5): e=4, w=0."""
    return da.make_context(5, 2, e=4, f0=1, K=5, eisenstein="cyclotomic")


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
