import itertools

import numpy as np
import pytest

_ACCEPTANCE_LINES = []


def exact_min_norm(pts):
    """Min norm over conv(pts) by enumerating supports and solving each KKT system.

    Independent of both the Frank-Wolfe solver and the grid oracle.
    """
    pts = np.asarray(pts, dtype=float)
    n = len(pts)
    best = np.inf
    for k in range(1, n + 1):
        for S in itertools.combinations(range(n), k):
            A = pts[list(S)]
            M = np.zeros((k + 1, k + 1))
            M[:k, :k] = A @ A.T
            M[:k, k] = 1.0
            M[k, :k] = 1.0
            rhs = np.zeros(k + 1)
            rhs[k] = 1.0
            try:
                v = np.linalg.solve(M, rhs)[:k]
            except np.linalg.LinAlgError:
                continue
            if np.all(v >= -1e-14):
                best = min(best, float(np.linalg.norm(v @ A)))
    return best


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def acceptance_log():
    def log(criterion, passed, detail):
        _ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}")

    return log


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
