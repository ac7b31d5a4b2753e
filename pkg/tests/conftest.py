import pytest

from cpclie.scenarios import get_decomposition

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def decomp():
    return get_decomposition


@pytest.fixture(scope="session")
def sl3r():
    return get_decomposition("sl_real:3")


@pytest.fixture(scope="session")
def sl3c():
    return get_decomposition("sl_complex:3")


@pytest.fixture(scope="session")
def sl3h():
    return get_decomposition("sl_quaternion:3")


@pytest.fixture(scope="session")
def sl4r():
    return get_decomposition("sl_real:4")


@pytest.fixture(scope="session")
def sp6():
    return get_decomposition("sp_real:3")


@pytest.fixture(scope="session")
def so25():
    return get_decomposition("so_pq:2,5")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
