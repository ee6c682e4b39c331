import numpy as np
import pytest

from spincirc import load_preset


_ACCEPTANCE = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=["fig2-b", "fig2-c", "fig3-corotate", "fig3-counter", "fig4-a", "fig4-b", "fig5"])
def pair_preset(request):
    return load_preset(request.param)


@pytest.fixture
def criterion():
    """Record one acceptance line; printed in the terminal summary."""

    def record(name, passed, detail=""):
        _ACCEPTANCE.append((name, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")
