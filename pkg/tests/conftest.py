import mpmath as mp
import pytest

from defbec import ModelParams


def imag_root(n_atoms, g, gamma=1.0, dps=40):
    """Independent closed form for the Delta = 0 physical root, beta = i*y.

    Solves (g/(2 sqrt N)) y^2 - Gamma y - g sqrt N = 0 in extended precision
    and keeps the root that tends to -g/gamma for large N.
    """
    with mp.workdps(dps):
        a = mp.mpf(n_atoms) * gamma / g
        return float(a - mp.sqrt(a * a + 2 * mp.mpf(n_atoms)))


def fig1_deviation(n_atoms, g=2.5, gamma=1.0):
    with mp.workdps(40):
        return float(abs(mp.mpf(g) / gamma - abs(mp.mpf(imag_root(n_atoms, g, gamma, 60)))))


@pytest.fixture
def fig_params():
    return ModelParams(delta=0.0, g=2.5, gamma=1.0, n_atoms=100.0)


@pytest.fixture
def oracle_params():
    return ModelParams(delta=0.0, g=0.5, gamma=1.0, n_atoms=25.0)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
