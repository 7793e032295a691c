import math

import pytest

from nbsums.arith import sieve
from nbsums.special_fn import default_atable

EULER_GAMMA = 0.57721566490153286061
LOG_2PI_MINUS_GAMMA = math.log(2 * math.pi) - EULER_GAMMA


@pytest.fixture(scope="session")
def atable():
    return default_atable()


@pytest.fixture(scope="session")
def table_1e5():
    return sieve(100_000)


def coprime_pairs(kmax, kmin=2):
    return [(h, k) for k in range(kmin, kmax + 1) for h in range(1, k) if math.gcd(h, k) == 1]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
