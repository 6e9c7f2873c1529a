import pytest

from heckekl.coxeter import build_system, cartan_preset

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def systems():
    return {name: build_system(cartan_preset(name)) for name in ("A1", "A2", "A3", "B2", "G2", "A1~", "A2~")}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
