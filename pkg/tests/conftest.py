import pytest

from actuator_attack.instance_format import load_bundled
from actuator_attack.synthesis import synthesize


@pytest.fixture(scope="session")
def fig3():
    return load_bundled("fig3")


@pytest.fixture(scope="session")
def fig3_sr(fig3):
    return fig3.realize()


@pytest.fixture(scope="session")
def fig3_result(fig3, fig3_sr):
    return synthesize(fig3.plant, fig3_sr, fig3.damage)


def lab(event, *command):
    from actuator_attack.supervisory import ObsLabel

    return ObsLabel(event, frozenset(command))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
