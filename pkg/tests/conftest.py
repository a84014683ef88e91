import pytest

_acceptance_results = []


def pytest_runtest_logreport(report):
    if "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _acceptance_results.append((name, report.outcome))
    elif report.when == "setup" and report.failed:
        _acceptance_results.append((name, "error"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for name, outcome in _acceptance_results:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"  {mark}  {name}")
