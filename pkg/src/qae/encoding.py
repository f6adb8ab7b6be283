"""Fixed-point binary encoding of vectors and the penalized QUBO objective.

Bit layout is element-major: variables ``alpha*K .. alpha*K + K - 1`` hold
element ``alpha``.  Within a block the first ``K - 1`` variables are
magnitude bits with weights ``1/2, 1/4, ...`` and the last one is the sign
bit with weight ``-1`` (two's complement), so every element lies in
``[-1, 1 - 2**(1 - K)]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EncodingConfig, LengthMismatch, Qubo, SymmetricMatrix, as_symmetric


@dataclass(frozen=True)
class ObjectiveSpec:
    """``F(v) = (v, A v) + lam * (v, v)`` over the code words of ``enc``."""

    A: SymmetricMatrix
    lam: float
    enc: EncodingConfig = EncodingConfig()

    def __post_init__(self):
        object.__setattr__(self, "A", as_symmetric(self.A))
        if not np.isfinite(self.lam):
            raise ValueError("lambda must be finite")
        object.__setattr__(self, "lam", float(self.lam))


def code_weights(K: int) -> np.ndarray:
    """Per-variable weights of one element's code word."""
    w = 2.0 ** -np.arange(1, K, dtype=float)
    return np.append(w, -1.0)


def coding_matrix(n: int, enc: EncodingConfig) -> np.ndarray:
    """``C`` of shape ``(n, n*K)`` with ``decode(x) == C @ x``."""
    K = enc.K
    C = np.zeros((n, n * K))
    w = code_weights(K)
    for alpha in range(n):
        C[alpha, alpha * K:(alpha + 1) * K] = w
    return C


def decode(x, n: int, enc: EncodingConfig) -> np.ndarray:
    x = np.asarray(x)
    if x.shape != (n * enc.K,):
        raise LengthMismatch(f"expected {n * enc.K} bits for n={n}, K={enc.K}, got {x.shape}")
    return x.reshape(n, enc.K).astype(float) @ code_weights(enc.K)


def encode(v, enc: EncodingConfig) -> np.ndarray:
    """Nearest code word (round half up) to ``v``; elements are clipped to the code range."""
    v = np.asarray(v, dtype=float)
    K = enc.K
    steps = 2 ** (K - 1)
    # integer in [-steps, steps - 1] in units of the resolution
    q = np.clip(np.floor(v * steps + 0.5), -steps, steps - 1).astype(np.int64)
    u = np.where(q < 0, q + 2 * steps, q)  # two's complement over K bits
    bits = np.zeros((v.size, K), dtype=np.int8)
    for i in range(K - 1):
        bits[:, i] = (u >> (K - 2 - i)) & 1
    bits[:, K - 1] = (u >> (K - 1)) & 1
    return bits.reshape(-1)


def build_qubo(spec: ObjectiveSpec) -> Qubo:
    """QUBO whose energy equals ``(v, (A + lam I) v)`` with ``v = decode(x)``.

    With ``v = C x`` the objective is ``x^T (C^T M C) x``; diagonal terms
    fold into linear weights (``x_i**2 == x_i``) and each off-diagonal pair
    is stored once with its weight doubled.
    """
    A = np.asarray(spec.A)
    n = A.shape[0]
    M = A + spec.lam * np.eye(n)
    C = coding_matrix(n, spec.enc)
    S = C.T @ M @ C
    S = 0.5 * (S + S.T)
    return Qubo.from_symmetric(S, 0.0)


def qubo_energy(Q: Qubo, x) -> float:
    return Q.energy(x)


def objective_value(spec: ObjectiveSpec, v) -> float:
    A = np.asarray(spec.A)
    v = np.asarray(v, dtype=float)
    if v.shape != (A.shape[0],):
        raise LengthMismatch(f"vector of length {v.shape} for n={A.shape[0]}")
    return float(v @ A @ v + spec.lam * (v @ v))
