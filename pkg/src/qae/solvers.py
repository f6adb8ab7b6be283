"""QUBO minimizers behind a common sampler interface.

A sampler is any object with ``max_variables`` (int or None for unbounded),
``deterministic`` (True when the output does not depend on the seed) and
``sample(Q, seed, budget=None) -> bits``.  Annealer hardware would plug in
here as one more sampler.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Protocol

import numba
import numpy as np

from .core import QaeError, Qubo, bits_to_int

EXACT_MAX_VARIABLES = 24


class TooLarge(QaeError, ValueError):
    pass


class Sampler(Protocol):
    max_variables: Optional[int]
    deterministic: bool

    def sample(self, Q: Qubo, seed: int = 0, budget: Optional[int] = None) -> np.ndarray: ...


def _split(Q: Qubo):
    W = np.ascontiguousarray(Q.couplings())
    d = np.ascontiguousarray(np.diag(Q.weights).copy())
    return W, d


@numba.njit(cache=True)
def local_fields(W, d, x):
    """``h_i = w_ii + sum_{j != i} C_ij x_j``; flipping bit i changes energy by ``(1 - 2 x_i) h_i``."""
    m = x.shape[0]
    h = d.copy()
    for j in range(m):
        if x[j]:
            for i in range(m):
                h[i] += W[i, j]
    return h


@numba.njit(cache=True)
def apply_flip(W, x, h, k):
    """Flip bit ``k`` in place, keeping the local fields ``h`` consistent. Returns the energy change."""
    delta = (1 - 2 * x[k]) * h[k]
    sgn = 1.0 - 2.0 * x[k]
    x[k] = 1 - x[k]
    m = x.shape[0]
    for j in range(m):
        h[j] += sgn * W[j, k]
    return delta


@numba.njit(cache=True)
def _exact_kernel(W, d, tie_tol):
    m = d.shape[0]
    x = np.zeros(m, dtype=np.int8)
    h = d.copy()
    e = 0.0
    best_e = 0.0
    best_code = 0
    code = 0
    for t in range(1, 1 << m):
        k = 0
        while not (t >> k) & 1:
            k += 1
        e += apply_flip(W, x, h, k)
        code ^= 1 << k
        if e < best_e - tie_tol:
            best_e = e
            best_code = code
        elif e <= best_e + tie_tol and code < best_code:
            best_code = code
    return best_code


def solve_exact(Q: Qubo) -> np.ndarray:
    """Global minimizer by Gray-code enumeration.

    Ties (to ``1e-12`` of the QUBO scale) go to the bitstring with the
    smallest unsigned integer value, reading bit 0 as least significant.
    """
    if Q.m > EXACT_MAX_VARIABLES:
        raise TooLarge(f"exact enumeration is capped at {EXACT_MAX_VARIABLES} variables, got {Q.m}")
    W, d = _split(Q)
    code = _exact_kernel(W, d, 1e-12 * Q.scale())
    return np.array([(code >> i) & 1 for i in range(Q.m)], dtype=np.int8)


@dataclass(frozen=True)
class TabuParams:
    """Tabu search settings; ``None`` fields take size-dependent defaults.

    ``restarts`` counts the random restarts after the first descent, which
    starts from ``initial`` (all zeros if not given).
    """

    max_iterations: Optional[int] = None
    tenure: Optional[int] = None
    restarts: int = 4
    seed: int = 0
    initial: Optional[tuple] = None

    def resolved(self, m: int) -> "TabuParams":
        it = self.max_iterations if self.max_iterations is not None else max(500, 10 * m)
        ten = self.tenure if self.tenure is not None else min(20, max(4, m // 4))
        if it < 1 or ten < 1 or self.restarts < 0:
            raise ValueError("tabu parameters must be positive")
        return replace(self, max_iterations=it, tenure=ten)


@numba.njit(cache=True)
def _tabu_descent(W, d, x, max_iterations, tenure):
    m = x.shape[0]
    h = local_fields(W, d, x)
    e = 0.0
    for i in range(m):
        if x[i]:
            e += d[i]
            for j in range(i + 1, m):
                if x[j]:
                    e += W[i, j]
    best_e = e
    best_x = x.copy()
    tabu_until = np.zeros(m, dtype=np.int64)
    for it in range(max_iterations):
        k = -1
        k_delta = np.inf
        for i in range(m):
            delta = (1 - 2 * x[i]) * h[i]
            if tabu_until[i] > it and not (e + delta < best_e - 1e-12 * (1.0 + abs(best_e))):
                continue
            if delta < k_delta:
                k_delta = delta
                k = i
        if k < 0:
            continue
        e += apply_flip(W, x, h, k)
        tabu_until[k] = it + 1 + tenure
        if e < best_e - 1e-12 * (1.0 + abs(best_e)):
            best_e = e
            best_x[:] = x
    return best_x


def _best_of(Q: Qubo, candidates) -> np.ndarray:
    """Lowest energy, ties broken by integer order."""
    return min(candidates, key=lambda x: (Q.energy(x), bits_to_int(x)))


def solve_tabu(Q: Qubo, params: TabuParams = TabuParams()) -> np.ndarray:
    """Single-flip tabu search with aspiration and seeded random restarts."""
    p = params.resolved(Q.m)
    W, d = _split(Q)
    tenure = min(p.tenure, Q.m - 1)
    rng = np.random.default_rng(p.seed)
    if p.initial is not None:
        x0 = np.array(p.initial, dtype=np.int8)
        if x0.shape != (Q.m,):
            raise ValueError(f"initial bitstring has length {x0.size}, QUBO has {Q.m} variables")
    else:
        x0 = np.zeros(Q.m, dtype=np.int8)
    starts = [x0] + [rng.integers(0, 2, Q.m).astype(np.int8) for _ in range(p.restarts)]
    results = [x0.copy()]
    for start in starts:
        results.append(_tabu_descent(W, d, start.copy(), p.max_iterations, tenure))
    return _best_of(Q, results)


class ExactSolver:
    max_variables = EXACT_MAX_VARIABLES
    deterministic = True

    def sample(self, Q: Qubo, seed: int = 0, budget: Optional[int] = None) -> np.ndarray:
        return solve_exact(Q)

    def describe(self) -> dict:
        return {"name": "exact"}


class TabuSolver:
    max_variables = None
    deterministic = False

    def __init__(self, params: TabuParams = TabuParams()):
        self.params = params

    def sample(self, Q: Qubo, seed: int = 0, budget: Optional[int] = None) -> np.ndarray:
        p = replace(self.params, seed=seed)
        if budget is not None:
            p = replace(p, max_iterations=budget)
        return solve_tabu(Q, p)

    def describe(self) -> dict:
        p = self.params
        return {"name": "tabu", "max_iterations": p.max_iterations, "tenure": p.tenure, "restarts": p.restarts}
