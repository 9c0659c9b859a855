import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

_acceptance_reports = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance_reports.append(report)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_reports:
        return
    terminalreporter.section("acceptance criteria")
    for report in _acceptance_reports:
        status = "PASS" if report.passed else "FAIL"
        name = report.nodeid.split("::")[-1]
        terminalreporter.write_line(f"[{status}] {name}")
