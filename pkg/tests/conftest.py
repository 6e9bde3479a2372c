from fractions import Fraction

import pytest

from hsr.gen import scene_from_2d


def tri2d(*pts):
    return tuple((Fraction(x), Fraction(y)) for x, y in pts)


@pytest.fixture
def two_overlapping():
    # far: right triangle of area 2; near: a smaller triangle poking out of it
    return scene_from_2d([tri2d((0, 0), (2, 0), (0, 2)), tri2d((1, -1), (3, Fraction(1, 2)), (Fraction(1, 2), Fraction(4, 5)))])


# one summary line per acceptance criterion, shown after the run
_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call" and report.passed:
        return
    number = mark.args[0]
    detail = dict(item.user_properties).get("detail", "")
    prev = _CRITERIA.get(number, ("PASS", ""))
    status = "PASS" if report.passed and prev[0] == "PASS" else "FAIL"
    _CRITERIA[number] = (status, detail or prev[1])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {detail}".rstrip())
