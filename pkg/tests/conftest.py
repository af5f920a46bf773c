"""Collects acceptance-criterion outcomes and prints one line per criterion."""

import pytest

_outcomes = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = tuple(mark.args)


def pytest_runtest_logreport(report):
    crit = getattr(report, "criterion", None)
    if crit is None:
        return
    n, title = crit
    entry = _outcomes.setdefault(n, {"title": title, "failed": False, "passed": False})
    if report.failed:
        entry["failed"] = True
    elif report.when == "call" and report.passed:
        entry["passed"] = True


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_outcomes):
        e = _outcomes[n]
        verdict = "FAIL" if e["failed"] else "PASS" if e["passed"] else "SKIPPED"
        terminalreporter.write_line(f"criterion {n}: {verdict}  {e['title']}")
