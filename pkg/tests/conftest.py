import numpy as np
import pytest


def random_spd(rng, n, cond=10.0):
    """Random SPD matrix with eigenvalues spread over ``[1, cond]``."""
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    d = np.geomspace(1.0, cond, n)
    S = (Q * d) @ Q.T
    return 0.5 * (S + S.T)


def random_cov_pair(rng, m, p, n=None):
    """Sample covariances of two random Gaussian populations."""
    side = m * p
    n = n or 3 * side + 10
    out = []
    for _ in range(2):
        L = np.linalg.cholesky(random_spd(rng, side, cond=5.0))
        X = rng.standard_normal((n, side)) @ L.T
        S = X.T @ X / n
        out.append(0.5 * (S + S.T))
    return out[0], out[1]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
