import pytest

from gqnm.presets import gg_scheme, glap_scheme, gmotg_scheme

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def gg():
    return gg_scheme()


@pytest.fixture(scope="session")
def gmotg():
    return gmotg_scheme()


@pytest.fixture(scope="session")
def glap():
    return glap_scheme()


@pytest.fixture(scope="session")
def acceptance_report():
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
