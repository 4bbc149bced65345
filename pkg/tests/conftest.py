import pytest

_LINES = []


@pytest.fixture
def criterion(capsys):
    """Record one acceptance line: criterion(label, ok, detail)."""

    def record(label, ok, detail=""):
        line = f"criterion {label}: {'PASS' if ok else 'FAIL'} {detail}".rstrip()
        _LINES.append(line)
        with capsys.disabled():
            print(f"\n{line}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
