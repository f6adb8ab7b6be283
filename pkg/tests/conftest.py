import numpy as np
import pytest

from qae.core import Qubo


def random_symmetric(rng, n, low=-1.0, high=1.0):
    a = rng.uniform(low, high, (n, n))
    return np.triu(a) + np.triu(a, 1).T


def random_qubo(rng, m, scale=1.0):
    return Qubo(np.triu(rng.normal(0.0, scale, (m, m))), float(rng.normal()))


def all_bitstrings(m):
    """Row k holds the bits of integer k, bit 0 first."""
    return ((np.arange(2**m)[:, None] >> np.arange(m)) & 1).astype(np.int8)


def brute_force_min(Q):
    """Independent exhaustive minimizer: energies of every bitstring, first minimum in integer order."""
    X = all_bitstrings(Q.m).astype(float)
    energies = Q.offset + np.einsum("ki,ij,kj->k", X, np.asarray(Q.weights), X)
    k = int(np.argmin(energies))
    return X[k].astype(np.int8), float(energies[k])


def decode_by_hand(x, n, K):
    """Element a = -q_K + sum_{i<K} 2^-i q_i with q_i = x[a*K + i - 1]."""
    v = []
    for a in range(n):
        q = [int(x[a * K + i - 1]) for i in range(1, K + 1)]
        v.append(-q[K - 1] + sum(2.0 ** -i * q[i - 1] for i in range(1, K)))
    return np.array(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
