import pytest

from biphoton.spectral import FrequencyGrid, MultiplexConfig, PhysicalParams


@pytest.fixture(scope="session")
def params():
    return PhysicalParams()


@pytest.fixture(scope="session")
def grid():
    return FrequencyGrid.uniform()


@pytest.fixture(scope="session")
def small_grid():
    # coarse but still resolves the 2.5 half-width Lorentzian
    return FrequencyGrid.uniform(-150.0, 150.0, 256)


def pairs(*items):
    return MultiplexConfig(tuple((float(p), float(q)) for p, q in items))


# criterion number -> (passed, summary); filled by test_acceptance.py
ACCEPTANCE = {}


def record(number, title, passed, detail):
    line = f"criterion {number} [{title}]: {'PASS' if passed else 'FAIL'} ({detail})"
    ACCEPTANCE[number] = (passed, line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n][1])
