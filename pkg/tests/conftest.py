"""Acceptance reporting: one PASS/FAIL line per criterion at the end of the run."""
import pytest

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    failed = report.failed or (report.when == "setup" and report.skipped)
    if report.when == "call" or failed:
        prev = _results.get(crit, (True, ""))
        detail = dict(report.user_properties).get("detail", "")
        _results[crit] = (prev[0] and not failed, detail or prev[1])


@pytest.fixture(autouse=True)
def _tag_criterion(request, record_property):
    mark = request.node.get_closest_marker("criterion")
    if mark is not None:
        record_property("criterion", f"{mark.args[0]}. {mark.args[1]}")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(_results, key=lambda c: int(c.split(".")[0])):
        ok, detail = _results[crit]
        line = f"{'PASS' if ok else 'FAIL'}  {crit}"
        tr.write_line(line + (f"  [{detail}]" if detail else ""))
