import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

#: one (status, criterion, detail) entry per acceptance check, in run order
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for status, name, detail in ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{status} {name}: {detail}")
