import pytest

from cyclic_ic.channel import etw_split, hk_params, make_channel, outer_params

_CRITERIA: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance line; the summary is printed at the end of the run."""
    def record(name: str, passed: bool, detail: str = ""):
        _CRITERIA.append((name, bool(passed), detail))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _CRITERIA:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")


@pytest.fixture
def two_user():
    """SNR = 15, INR = 3 for both users, ETW split."""
    ch = make_channel(2, [15.0, 15.0], [3.0, 3.0])
    return ch, hk_params(ch, etw_split(ch)), outer_params(ch)
