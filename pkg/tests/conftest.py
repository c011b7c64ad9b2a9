import itertools
from collections import Counter
from fractions import Fraction

import pytest

ACCEPTANCE_LINES: list[str] = []


def descents(perm) -> int:
    return sum(a > b for a, b in zip(perm, perm[1:]))


def enumerate_pmf(n: int) -> list[Fraction]:
    """Law of D_n by brute-force enumeration of S_n."""
    counts = Counter(descents(p) for p in itertools.permutations(range(n)))
    total = sum(counts.values())
    return [Fraction(counts[k], total) for k in range(n)]


@pytest.fixture(scope="session")
def pmf_oracle():
    cache: dict[int, list[Fraction]] = {}

    def get(n: int) -> list[Fraction]:
        if n not in cache:
            cache[n] = enumerate_pmf(n)
        return cache[n]

    return get


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
