import random
from fractions import Fraction

import pytest

from duflokit.liealg import SUITE_CATALOG, resolve_algebra
from duflokit.sympoly import SymPolynomial


@pytest.fixture(params=SUITE_CATALOG)
def alg(request):
    return resolve_algebra(request.param)


@pytest.fixture
def sl2():
    return resolve_algebra("sl2")


@pytest.fixture
def sl2_gens(sl2):
    return [SymPolynomial.gen(3, i) for i in range(3)]


@pytest.fixture
def rng():
    return random.Random(12345)


def frac_matrix(rng, rows, cols, density=0.6):
    return [
        [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) if rng.random() < density else Fraction(0)
         for _ in range(cols)]
        for _ in range(rows)
    ]


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
