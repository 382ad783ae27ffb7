"""Collects outcomes of tests tagged ``@pytest.mark.acceptance("...")`` and
prints one PASS/FAIL/SKIP line per criterion at the end of the run."""

from collections import OrderedDict


_outcomes = OrderedDict()
_names = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark:
            _names[item.nodeid] = mark.args[0]
            _outcomes.setdefault(mark.args[0], [])


def pytest_runtest_logreport(report):
    name = _names.get(report.nodeid)
    if name is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes[name].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name, results in _outcomes.items():
        if not results:
            continue
        if "failed" in results:
            status = "FAIL"
        elif all(r == "skipped" for r in results):
            status = "SKIP"
        else:
            status = "PASS"
        terminalreporter.write_line(f"{status}  {name}")

