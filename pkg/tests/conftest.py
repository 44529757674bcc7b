import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from monohull.core import Instance

ACCEPTANCE_LINES = []

# Hand-picked objectives on n=3, a3=1, b=(1,1,2), one per certificate case.
CRAFTED = {
    "A1": (1, (0, 0, 0)),
    "A2a": (1, (0, 0, -5)),
    "A2b": (-1, (2, 2, 0)),
    "A3": (-1, (1, 1, 1)),
    "A4": (-2, (1, 1, -1)),
    "B1": (5, (1, -1, 0)),
    "B2": (2, (0, -1, -10)),
    "B3": (-1, (1, -1, 0)),
    "B4": (-1, (1, -1, -1)),
}
BASE = Instance(3, 1, (1, 1, 2))


def rand_rational(rng: random.Random, lo: int = 1, hi: int = 12, max_den: int = 7) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_instance(rng: random.Random, n: int, zero_an: bool = False) -> Instance:
    b = tuple(rand_rational(rng) for _ in range(n))
    if zero_an:
        return Instance(n, 0, b)
    # strictly inside (0, b_n)
    frac = Fraction(rng.randint(1, 19), 20)
    return Instance(n, b[-1] * frac, b)


@st.composite
def instances(draw, n_min=2, n_max=6, allow_zero_an=False):
    n = draw(st.integers(n_min, n_max))
    pos = st.fractions(min_value=Fraction(1, 4), max_value=8, max_denominator=9)
    b = tuple(draw(pos) for _ in range(n))
    frac = draw(
        st.fractions(min_value=0 if allow_zero_an else Fraction(1, 50), max_value=Fraction(49, 50), max_denominator=50)
    )
    return Instance(n, b[-1] * frac, b)


@pytest.fixture
def rng():
    return random.Random(20241016)


@pytest.fixture
def acceptance_report():
    def report(number: int, name: str, passed: bool, detail: str = ""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {name}" + (f" -- {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
