"""Per-criterion pass/fail summary for the acceptance suite."""
import pytest

_RESULTS = {}
_TITLES = {}
_NOTES = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            _TITLES[m.args[0]] = m.args[1]
            _RESULTS.setdefault(m.args[0], [])


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.failed or report.skipped):
        return
    number = getattr(report, "criterion", None)
    if number is not None:
        _RESULTS[number].append(report.passed if report.when == "call" else False)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    m = item.get_closest_marker("criterion")
    if m:
        outcome.get_result().criterion = m.args[0]


@pytest.fixture
def note(request):
    """Attach a line of measured values to the test's criterion."""
    number = request.node.get_closest_marker("criterion").args[0]
    return lambda text: _NOTES.setdefault(number, []).append(text)


def pytest_terminal_summary(terminalreporter):
    if not _TITLES:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_TITLES):
        runs = _RESULTS.get(number, [])
        if not runs:
            status = "NOT RUN"
        else:
            status = "PASS" if all(runs) else "FAIL"
        tr.write_line(f"criterion {number}: {status}  {_TITLES[number]}")
        for text in _NOTES.get(number, []):
            tr.write_line(f"    {text}")
