import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

import report  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if not report.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(report.RESULTS):
        terminalreporter.write_line(report.line(num))
