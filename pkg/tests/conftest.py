import os

import pytest
from hypothesis import HealthCheck, settings

from gst12 import Instance

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for the acceptance summary."""
    def record(name: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "")
        _ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def star3():
    # non-terminal 3 adjacent to terminals 0, 1, 2
    return Instance.build(4, [(0, 3), (1, 3), (2, 3)], [[0, 1, 2]])


@pytest.fixture
def two_pairs_bridge():
    # pairs {0,1} and {2,3} joined only by the edge {1,2}
    return Instance.build(4, [(1, 2)], [[0, 1], [2, 3]])
