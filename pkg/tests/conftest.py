import pytest

from ibenet import CongruenceBehaviour, NetworkConfig


@pytest.fixture
def two_drives():
    return [
        CongruenceBehaviour("hunger", {"food": 1.0, "grass": 0.5}),
        CongruenceBehaviour("thirst", {"water": 1.0}),
    ]


@pytest.fixture
def config(two_drives):
    return NetworkConfig(drives=two_drives, alpha=0.0)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if not RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
