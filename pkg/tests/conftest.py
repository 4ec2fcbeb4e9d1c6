import random
from fractions import Fraction

import pytest

from hiking import IntervalInstance

ACCEPTANCE_LINES: list[str] = []


def random_intervals(rng: random.Random, n: int) -> list[tuple[int, int]]:
    out = []
    for _ in range(n):
        l, r = sorted((rng.randint(1, n), rng.randint(1, n)))
        out.append((l, r))
    return out


def random_weights(rng: random.Random, n: int) -> list[Fraction]:
    return [Fraction(rng.randint(0, 20), rng.randint(1, 7)) for _ in range(n)]


def random_instance(rng: random.Random, n: int, weighted: bool = False) -> IntervalInstance:
    weights = random_weights(rng, n) if weighted else None
    return IntervalInstance.from_intervals(random_intervals(rng, n), weights)


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture
def report():
    """Record a one-line acceptance verdict, echoed in the terminal summary."""
    def add(line: str) -> None:
        print(line)
        ACCEPTANCE_LINES.append(line)
    return add


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
