import pytest

from coldplasma.cli import reproduce_variant

ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


_RUNS = {}


@pytest.fixture(scope="session")
def variant_runs():
    """All six reference variants, computed once per session."""
    def get(k):
        if k not in _RUNS:
            _RUNS[k] = reproduce_variant(k, write=False)
        return _RUNS[k]
    return get


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
