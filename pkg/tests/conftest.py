import os

import pytest
from hypothesis import HealthCheck, settings

from bergmanlab import domain as dm

settings.register_profile(
    "default", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.too_slow],
    derandomize=os.environ.get("BERGMANLAB_RANDOM") is None,
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def bidisc():
    return dm.bidisc()


@pytest.fixture(scope="session")
def hull():
    """Convex hull of (0,0), (1,0), (1,1), (0,1.5): normalized, vertical disc only."""
    return dm.trapezoid_hull(1.5)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
