import math

import pytest

from nulldist import Circle, Interval, WarpedSpacetime


@pytest.fixture
def minkowski():
    return WarpedSpacetime.product((0.0, 2.0), Interval(4.0))


@pytest.fixture
def cylinder():
    return WarpedSpacetime.product((0.0, 2.0), Circle(2 * math.pi))


ACCEPTANCE_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""
    lines = request.config.stash.setdefault(ACCEPTANCE_LINES, [])

    def record(number: int, title: str, ok: bool, detail: str) -> None:
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}: {title} [{detail}]"
        print(line)
        lines.append((number, line))
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
