import numpy as np
import pytest

from nlpsa import design, linear_lspsa

PAPER_STEPS = (0, 0.78, 1.81, 3.11, 4.54, 5.93, 7.24)
PAPER_ZEROS = (-2, -1, 0, 2, 3, 4)

# printed with two decimals next to the seven steps above
PAPER_COEFFS = (-0.06, 0.21 - 0.21j, -0.05 - 0.2j, -0.22, -0.04 - 0.22j, 0.23 + 0.08j, -0.07 - 0.1j)
PAPER_GAIN = 5.142

# independent oracle: numpy.linalg.solve on the same 7x7 system
PAPER_COEFFS_SOLVED = (
    0.008056426286 + 0j,
    0.084101299321 + 0.08319818062j,
    -0.042817458474 + 0.175572878538j,
    -0.223176770537 + 0.007053093111j,
    -0.039186617294 - 0.22505883986j,
    0.191894721055 - 0.070740539168j,
    0.021128399642 + 0.029975226759j,
)
PAPER_GAIN_SOLVED = 5.210057455754327


def random_steps(rng, n, min_gap=0.1):
    """Steps in [0, 2*pi*n/(n-1)] whose circular separation is >= min_gap."""
    hi = 2 * np.pi * n / (n - 1)
    while True:
        t = rng.uniform(0, hi, n)
        d = np.abs(np.subtract.outer(t, t))
        d = np.abs(np.remainder(d + np.pi, 2 * np.pi) - np.pi)
        np.fill_diagonal(d, np.inf)
        if d.min() >= min_gap:
            return t


@pytest.fixture(scope="session")
def paper_design():
    return design(PAPER_STEPS, PAPER_ZEROS)


@pytest.fixture(scope="session")
def lspsa7():
    return linear_lspsa(7)


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)
