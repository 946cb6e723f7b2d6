import pytest

_LINES = []


@pytest.fixture
def report():
    """Record a criterion outcome; the lines are printed in the terminal summary."""

    def record(number, label, measured, tolerance, passed):
        status = "PASS" if passed else "FAIL"
        _LINES.append((number, f"criterion {number:>2} {status}  {label}: measured {measured}, tolerance {tolerance}"))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_LINES, key=lambda item: item[0]):
        terminalreporter.write_line(line)
