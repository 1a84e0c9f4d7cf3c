import pytest

from hyperhurwitz import cli

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def gaussian_curve():
    return cli.gaussian_curve()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
