"""Shared domain types and small linear-algebra helpers."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any

import numpy as np

ASYMMETRY_RTOL = 1e-12


class QaeError(Exception):
    """Base class for all errors raised by this package."""


class NotSymmetric(QaeError, ValueError):
    pass


class ZeroVector(QaeError, ValueError):
    pass


class LengthMismatch(QaeError, ValueError):
    pass


class ZeroMatrix(QaeError):
    pass


@dataclass(frozen=True, eq=False)
class SymmetricMatrix:
    """Dense real symmetric matrix.

    Inputs that are asymmetric by less than ``1e-12 * max|a_ij|`` are
    repaired by averaging with the transpose; anything worse is rejected.
    The stored array is read-only.
    """

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix has non-finite entries")
        scale = float(np.max(np.abs(a)))
        skew = float(np.max(np.abs(a - a.T)))
        if skew > ASYMMETRY_RTOL * scale:
            raise NotSymmetric(f"asymmetry {skew:.3e} exceeds tolerance {ASYMMETRY_RTOL * scale:.3e}")
        if skew > 0.0:
            a = 0.5 * (a + a.T)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, SymmetricMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def digest(self) -> str:
        """SHA-256 over dimension and little-endian float64 entries."""
        h = hashlib.sha256()
        h.update(str(self.n).encode())
        h.update(np.ascontiguousarray(self.entries, dtype="<f8").tobytes())
        return h.hexdigest()


def as_symmetric(a) -> SymmetricMatrix:
    return a if isinstance(a, SymmetricMatrix) else SymmetricMatrix(np.asarray(a, dtype=float))


@dataclass(frozen=True)
class EncodingConfig:
    """Fixed-point code: ``K`` binary variables per vector element.

    The sign variable is one of the ``K``, so a QUBO over an ``n``-vector
    has exactly ``n * K`` variables and the grid spacing is ``2**(1 - K)``.
    """

    K: int = 10

    def __post_init__(self):
        if int(self.K) != self.K or self.K < 2:
            raise ValueError(f"K must be an integer >= 2, got {self.K}")

    @property
    def resolution(self) -> float:
        return 2.0 ** (1 - self.K)

    def qubo_size(self, n: int) -> int:
        return n * self.K


@dataclass
class Eigenpair:
    value: float
    vector: np.ndarray
    lambda_star: float
    meta: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "value": float(self.value),
            "vector": [float(c) for c in self.vector],
            "lambda_star": float(self.lambda_star),
            "meta": dict(self.meta),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Eigenpair":
        return cls(
            value=float(d["value"]),
            vector=np.array(d["vector"], dtype=float),
            lambda_star=float(d["lambda_star"]),
            meta=dict(d.get("meta", {})),
        )

    def __eq__(self, other):
        if not isinstance(other, Eigenpair):
            return NotImplemented
        return (
            self.value == other.value
            and np.array_equal(self.vector, other.vector)
            and self.lambda_star == other.lambda_star
            and self.meta == other.meta
        )


def max_abs_element(A) -> float:
    return float(np.max(np.abs(np.asarray(A, dtype=float))))


def spectral_scale(A) -> float:
    """Scale used for all tolerances: ``max(1, max|a_ij|)``."""
    return max(1.0, max_abs_element(A))


def rayleigh_quotient(A, v) -> float:
    a = np.asarray(A, dtype=float)
    v = np.asarray(v, dtype=float)
    if v.shape != (a.shape[0],):
        raise LengthMismatch(f"vector of length {v.shape} for a {a.shape[0]}x{a.shape[0]} matrix")
    norm = float(np.linalg.norm(v))
    if norm < 1e-300:
        raise ZeroVector("Rayleigh quotient of a zero vector")
    u = v / norm
    return float(u @ a @ u)


def normalized(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(v))
    if norm < 1e-300:
        raise ZeroVector("cannot normalize a zero vector")
    return v / norm


@dataclass(frozen=True, eq=False)
class Qubo:
    """Upper-triangular QUBO: ``energy(x) = offset + sum_{i<=j} w_ij x_i x_j``.

    ``weights`` is stored as a dense ``m x m`` array with zeros below the
    diagonal.
    """

    weights: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        w = np.array(self.weights, dtype=float, copy=True)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
            raise ValueError(f"expected a non-empty square weight array, got shape {w.shape}")
        if np.any(np.tril(w, -1) != 0.0):
            raise ValueError("QUBO weights must be upper triangular")
        if not np.all(np.isfinite(w)) or not np.isfinite(self.offset):
            raise ValueError("QUBO has non-finite weights")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def m(self) -> int:
        return self.weights.shape[0]

    @classmethod
    def from_dict(cls, m: int, terms: dict, offset: float = 0.0) -> "Qubo":
        """Build from ``{(i, j): w}``; ``(j, i)`` keys are folded onto ``(i, j)``."""
        w = np.zeros((m, m))
        for (i, j), val in terms.items():
            i, j = min(i, j), max(i, j)
            w[i, j] += val
        return cls(w, offset)

    def to_dict(self) -> dict:
        i, j = np.nonzero(self.weights)
        return {(int(a), int(b)): float(self.weights[a, b]) for a, b in zip(i, j)}

    def couplings(self) -> np.ndarray:
        """Symmetric coupling matrix with zero diagonal (``C_ij = w_min(i,j),max(i,j)``)."""
        w = self.weights
        off = w - np.diag(np.diag(w))
        return off + off.T

    def to_symmetric(self) -> np.ndarray:
        """Matrix ``S`` with ``x^T S x == energy(x) - offset`` and ``S == S.T``."""
        return np.diag(np.diag(self.weights)) + 0.5 * self.couplings()

    @classmethod
    def from_symmetric(cls, S, offset: float = 0.0) -> "Qubo":
        S = np.asarray(S, dtype=float)
        return cls(np.triu(S + S.T) - np.diag(np.diag(S)), offset)

    def energy(self, x) -> float:
        x = np.asarray(x)
        if x.shape != (self.m,):
            raise LengthMismatch(f"bitstring of length {x.shape} for a QUBO over {self.m} variables")
        xf = x.astype(float)
        return float(self.offset + xf @ self.weights @ xf)

    def scale(self) -> float:
        return max(1.0, abs(self.offset) + float(np.sum(np.abs(self.weights))))


def bits_to_int(x) -> int:
    """Unsigned integer value of a bitstring, bit 0 least significant."""
    return sum(int(b) << i for i, b in enumerate(x))


def bits_to_str(x) -> str:
    return "".join("1" if b else "0" for b in x)


def str_to_bits(s: str) -> np.ndarray:
    return np.array([c == "1" for c in s], dtype=np.int8)
