import pytest

_LINES = []


@pytest.fixture(scope="session")
def report():
    """Record one PASS/FAIL line per acceptance criterion; printed at session end."""

    def add(name, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
        _LINES.append(line)
        print(line)
        return ok

    return add


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
