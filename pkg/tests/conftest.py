import random

import pytest

from latsize.geometry import LatticePolytope

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record a one-line pass/fail verdict for the terminal summary."""

    def _record(criterion: str, ok: bool, detail: str = ""):
        _ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f": {detail}" if detail else ""))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_unimodular(n: int, rng: random.Random, steps: int = 6, spread: int = 2):
    """Product of random elementary row operations, row swaps and sign flips."""
    A = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        kind = rng.random()
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if kind < 0.6 and n > 1:
            c = rng.choice([x for x in range(-spread, spread + 1) if x])
            A[i] = [a + c * b for a, b in zip(A[i], A[j])]
        elif kind < 0.8 and n > 1:
            A[i], A[j] = A[j], A[i]
        else:
            A[i] = [-a for a in A[i]]
    return A


def random_polytope(n: int, rng: random.Random, npts: int | None = None, lo: int = -5, hi: int = 5):
    npts = npts or rng.randint(1, n + 3)
    return LatticePolytope(tuple(tuple(rng.randint(lo, hi) for _ in range(n)) for _ in range(npts)))


def random_full_polytope(n: int, rng: random.Random, lo: int = -2, hi: int = 2):
    while True:
        P = random_polytope(n, rng, rng.randint(n + 1, n + 3), lo, hi)
        if P.is_full_dimensional():
            return P
