import itertools
import math

import numpy as np
import pytest

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def leibniz_det(M) -> float:
    """Determinant by the permutation expansion; independent of LU."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    total = 0.0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        total += (-1) ** inversions * math.prod(M[i, perm[i]] for i in range(n))
    return total


def brute_s_plus(x) -> int:
    """S+ by enumerating every +-1 assignment of the zeros."""
    x = list(x)
    zeros = [i for i, v in enumerate(x) if v == 0]
    best = 0
    for fill in itertools.product((-1, 1), repeat=len(zeros)):
        y = [int(np.sign(v)) for v in x]
        for i, f in zip(zeros, fill):
            y[i] = f
        best = max(best, sum(1 for a, b in zip(y, y[1:]) if a != b))
    return best


def brute_s_minus(x) -> int:
    s = [int(np.sign(v)) for v in x if v != 0]
    return sum(1 for a, b in zip(s, s[1:]) if a != b)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_RESULTS


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
