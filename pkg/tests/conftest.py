import pytest

_CRITERIA = []


@pytest.fixture(scope="session")
def criterion():
    """Record a one-line pass/fail verdict that is echoed in the terminal summary."""

    def record(label, passed, detail=""):
        status = "PASS" if passed else "FAIL"
        if passed is None:
            status = "INFO"
        _CRITERIA.append(f"[{status}] {label}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
