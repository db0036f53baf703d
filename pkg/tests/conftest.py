import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# filled by tests/test_acceptance.py, printed at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def census7_timed():
    from index3.census import enumerate_index3
    from index3.field import make_field

    t = time.perf_counter()
    report = enumerate_index3(make_field(7), 12, 14)
    return report, time.perf_counter() - t


@pytest.fixture(scope="session")
def census7(census7_timed):
    return census7_timed[0]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
