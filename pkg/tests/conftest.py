import math

import pytest
from hypothesis import HealthCheck, settings

from pwidths import domains

settings.register_profile(
    "fixed",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("fixed")

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)


@pytest.fixture
def T():
    return domains.triangle()


@pytest.fixture
def S():
    return domains.square()


@pytest.fixture
def Q():
    return domains.tetrahedron()


# --- acceptance summary ---------------------------------------------------------

_CRITERIA: dict = {}


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or report.outcome != "passed":
        prev = _CRITERIA.get(crit, (True, ""))
        _CRITERIA[crit] = (prev[0] and report.outcome == "passed", dict(report.user_properties)["title"])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_CRITERIA):
        ok, title = _CRITERIA[crit]
        terminalreporter.write_line(f"criterion {crit}: {'PASS' if ok else 'FAIL'}  {title}")
