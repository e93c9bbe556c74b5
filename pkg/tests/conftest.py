from fractions import Fraction

import pytest

from lacuna.tube import TubeSpec

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


@pytest.fixture
def spec11():
    return TubeSpec(1, 1, HALF)


@pytest.fixture
def spec21():
    return TubeSpec(2, 1, HALF)


_criteria: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    number, title = getattr(report, "criterion", (None, None))
    if number is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[number] = (title, "PASS" if report.passed else "FAIL")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
