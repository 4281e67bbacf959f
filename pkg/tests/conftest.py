import math

import pytest

from billiard_gauge.body import build_disk_polygon

SQ3 = math.sqrt(3.0)

# acceptance criteria append (number, passed, detail) here; printed at the end of the run
ACCEPTANCE_LINES: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def disk():
    return build_disk_polygon([(0.0, 0.0)], 1.0)


@pytest.fixture(scope="session")
def reuleaux():
    return build_disk_polygon([(0.0, 0.0), (1.0, 0.0), (0.5, SQ3 / 2)], 1.0)


@pytest.fixture(scope="session")
def lens():
    return build_disk_polygon([(-0.3, 0.0), (0.3, 0.0)], 1.0)


@pytest.fixture(scope="session")
def thin():
    # non-fat: three centers on a circle of radius 0.9, pairwise distance ~1.56
    cs = [(0.9 * math.cos(a), 0.9 * math.sin(a)) for a in (math.pi / 2, math.pi / 2 + 2 * math.pi / 3,
                                                          math.pi / 2 + 4 * math.pi / 3)]
    return build_disk_polygon(cs, 1.0)
