"""The annealer eigensolver loop: lambda bracketing, bisection, deflation."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Callable, List, Optional

import numpy as np

from .core import (
    EncodingConfig,
    Eigenpair,
    QaeError,
    SymmetricMatrix,
    ZeroMatrix,
    as_symmetric,
    bits_to_str,
    max_abs_element,
    normalized,
    rayleigh_quotient,
    spectral_scale,
    str_to_bits,
)
from .decomposer import DecomposingSolver
from .encoding import ObjectiveSpec, build_qubo, decode
from .solvers import Sampler

MAX_DOUBLINGS = 60


class RangeNotFound(QaeError):
    pass


class NotNormalized(QaeError, ValueError):
    pass


@dataclass
class QaeConfig:
    """Eigensolver settings.

    Tolerances given as ``None`` are scaled by ``spectral_scale(A)``:
    ``lambda_tolerance = 1e-6 * scale`` and ``rq_tolerance = 1e-8 * scale``.
    """

    enc: EncodingConfig = field(default_factory=EncodingConfig)
    solver: Sampler = field(default_factory=DecomposingSolver)
    lambda_tolerance: Optional[float] = None
    rq_tolerance: Optional[float] = None
    max_bisections: int = 60
    mu_multiplier: float = 16.0
    seed: int = 0

    def __post_init__(self):
        for name in ("lambda_tolerance", "rq_tolerance"):
            val = getattr(self, name)
            if val is not None and not val > 0:
                raise ValueError(f"{name} must be positive")
        if not self.mu_multiplier > 0:
            raise ValueError("mu_multiplier must be positive")
        if self.max_bisections < 0:
            raise ValueError("max_bisections must be non-negative")

    def tolerances(self, A) -> tuple:
        s = spectral_scale(A)
        lt = self.lambda_tolerance if self.lambda_tolerance is not None else 1e-6 * s
        rt = self.rq_tolerance if self.rq_tolerance is not None else 1e-8 * s
        return lt, rt

    def describe(self) -> dict:
        solver = self.solver.describe() if hasattr(self.solver, "describe") else {"name": type(self.solver).__name__}
        return {
            "K": self.enc.K,
            "solver": solver,
            "lambda_tolerance": self.lambda_tolerance,
            "rq_tolerance": self.rq_tolerance,
            "max_bisections": self.max_bisections,
            "mu_multiplier": self.mu_multiplier,
            "seed": self.seed,
        }


@dataclass
class SearchRecord:
    lam: float
    bits: str
    energy: float
    r: Optional[float]  # Rayleigh quotient; None for the trivial solution


@dataclass
class LambdaSearchState:
    """Bracket ``lo < hi``: best QUBO solution non-trivial at ``lo``, trivial at ``hi``.

    ``solves`` doubles as the RNG position: the seed of the k-th QUBO solve
    of a run is derived from ``(config seed, stream, k)``.
    """

    lo: float
    hi: float
    history: List[SearchRecord] = field(default_factory=list)
    solves: int = 0
    bisections: int = 0
    last_r: Optional[float] = None
    last_bits: Optional[str] = None
    done: bool = False

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "LambdaSearchState":
        d = dict(d)
        d["history"] = [SearchRecord(**h) for h in d["history"]]
        return cls(**d)


def is_trivial(x) -> bool:
    return not np.any(np.asarray(x))


def solve_seed(seed: int, stream: int, k: int) -> int:
    return int(np.random.SeedSequence([seed, stream, k]).generate_state(1)[0])


class _Probe:
    """Solves the QUBO at a given lambda and logs the outcome."""

    def __init__(self, A: SymmetricMatrix, cfg: QaeConfig, state: LambdaSearchState, stream: int):
        self.A, self.cfg, self.state, self.stream = A, cfg, state, stream
        self.degenerate = False

    def __call__(self, lam: float) -> Optional[float]:
        st = self.state
        Q = build_qubo(ObjectiveSpec(self.A, lam, self.cfg.enc))
        # F == 0 everywhere: every bitstring is optimal, so neither end is certified
        self.degenerate = not np.any(Q.weights)
        x = np.asarray(self.cfg.solver.sample(Q, solve_seed(self.cfg.seed, self.stream, st.solves)))
        st.solves += 1
        if x.shape != (Q.m,):
            raise QaeError(f"sampler returned {x.shape} bits for a {Q.m}-variable QUBO")
        energy = Q.energy(x)
        r = None
        if not is_trivial(x):
            r = rayleigh_quotient(self.A, decode(x, self.A.n, self.cfg.enc))
        st.history.append(SearchRecord(float(lam), bits_to_str(x), energy, r))
        # a non-zero solution that does not beat the null vector cannot certify the lo end
        if r is None or not energy < 0.0:
            return None
        return r


def find_lambda_range(A, cfg: QaeConfig, *, stream: int = 0, state: Optional[LambdaSearchState] = None) -> LambdaSearchState:
    """Bracket the trivial/non-trivial boundary, starting from ``+-max|a_ij|`` and doubling."""
    A = as_symmetric(A)
    g = max_abs_element(A)
    if g == 0.0:
        raise ZeroMatrix("cannot bracket lambda for the zero matrix")
    st = state if state is not None else LambdaSearchState(-g, g)
    probe = _Probe(A, cfg, st, stream)

    lo = -g
    for _ in range(MAX_DOUBLINGS + 1):
        r = probe(lo)
        if r is not None and not probe.degenerate:
            st.last_r, st.last_bits = r, st.history[-1].bits
            break
        lo *= 2.0
    else:
        raise RangeNotFound(f"no non-trivial solution down to lambda={lo / 2:.6g}")

    hi = g
    for _ in range(MAX_DOUBLINGS + 1):
        r = probe(hi)
        if r is None and not probe.degenerate:
            break
        hi *= 2.0
    else:
        raise RangeNotFound(f"no trivial solution up to lambda={hi / 2:.6g}")
    st.lo, st.hi = lo, hi
    return st


def _best_pair(A: SymmetricMatrix, cfg: QaeConfig, st: LambdaSearchState, seed: int) -> Eigenpair:
    best = None
    for rec in st.history:
        if rec.r is not None and (best is None or rec.r < best.r):
            best = rec
    if best is None:
        raise RangeNotFound("no non-trivial solution recorded")
    bits = np.array([c == "1" for c in best.bits], dtype=np.int8)
    vec = normalized(decode(bits, A.n, cfg.enc))
    return Eigenpair(
        value=rayleigh_quotient(A, vec),
        vector=vec,
        lambda_star=best.lam,
        meta={
            "bisections": st.bisections,
            "qubo_solves": st.solves,
            "lambda_range": [st.lo, st.hi],
            "K": cfg.enc.K,
            "seed": seed,
        },
    )


def same_direction(bits_a: str, bits_b: str, n: int, enc: EncodingConfig) -> bool:
    """True when two non-trivial code words decode to parallel vectors (either sign)."""
    u = normalized(decode(str_to_bits(bits_a), n, enc))
    w = normalized(decode(str_to_bits(bits_b), n, enc))
    return min(np.linalg.norm(u - w), np.linalg.norm(u + w)) <= 1e-12


def ground_state(
    A,
    cfg: QaeConfig,
    *,
    stream: int = 0,
    state: Optional[LambdaSearchState] = None,
    on_step: Optional[Callable[[LambdaSearchState], None]] = None,
) -> Eigenpair:
    """Lowest eigenpair estimate by bisection on the normalization penalty.

    ``state`` resumes a previously checkpointed search; ``on_step`` is
    called with the live state after the bracket is found and after every
    bisection.  The returned pair is the lowest Rayleigh quotient seen over
    the whole search.
    """
    A = as_symmetric(A)
    lam_tol, rq_tol = cfg.tolerances(A)
    if state is None:
        st = find_lambda_range(A, cfg, stream=stream)
        if on_step is not None:
            on_step(st)
    else:
        st = state
    probe = _Probe(A, cfg, st, stream)

    while not st.done:
        if st.bisections >= cfg.max_bisections or st.hi - st.lo < lam_tol:
            st.done = True
            break
        mid = 0.5 * (st.lo + st.hi)
        r = probe(mid)
        st.bisections += 1
        if r is None:
            st.hi = mid
        else:
            st.lo = mid
            bits = st.history[-1].bits
            # an unchanged direction says nothing about convergence (it is what
            # happens deep in the concave regime, far from the boundary)
            if st.last_bits is None or not same_direction(bits, st.last_bits, A.n, cfg.enc):
                if st.last_r is not None and abs(r - st.last_r) < rq_tol:
                    st.done = True
                st.last_r, st.last_bits = r, bits
        if on_step is not None:
            on_step(st)
    return _best_pair(A, cfg, st, cfg.seed)


def deflate(A, pair: Eigenpair, mu: float) -> SymmetricMatrix:
    """Shift ``pair`` up by ``mu``: ``A + mu * v v^T``."""
    v = np.asarray(pair.vector, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise NotNormalized(f"eigenvector norm {np.linalg.norm(v):.12g} is not 1")
    a = np.asarray(as_symmetric(A)) + mu * np.outer(v, v)
    return SymmetricMatrix(0.5 * (a + a.T))


def spectrum(
    A,
    n_states: int,
    cfg: QaeConfig,
    *,
    completed: Optional[List[Eigenpair]] = None,
    deflated: Optional[SymmetricMatrix] = None,
    state: Optional[LambdaSearchState] = None,
    on_step: Optional[Callable] = None,
    on_pair: Optional[Callable] = None,
) -> List[Eigenpair]:
    """Lowest ``n_states`` eigenpairs by repeated ground-state runs with deflation.

    Every deflation uses ``mu = mu_multiplier * max|a_ij|`` of the original
    matrix.  Values are Rayleigh quotients on the original matrix.  The
    resume arguments (``completed``, ``deflated``, ``state``) restart a run
    from a checkpoint; ``on_step(k, state)`` and ``on_pair(pairs, deflated)``
    are the checkpoint hooks.
    """
    A = as_symmetric(A)
    if not 1 <= n_states <= A.n:
        raise ValueError(f"n_states must be in [1, {A.n}], got {n_states}")
    mu = cfg.mu_multiplier * max_abs_element(A)
    pairs = list(completed or [])
    Ak = deflated if deflated is not None else A
    while len(pairs) < n_states:
        k = len(pairs)
        step = None if on_step is None else (lambda st, k=k: on_step(k, st))
        p = ground_state(Ak, cfg, stream=k, state=state, on_step=step)
        state = None
        Ak = deflate(Ak, p, mu)
        p.value = rayleigh_quotient(A, p.vector)
        pairs.append(p)
        if on_pair is not None:
            on_pair(pairs, Ak)
    return sorted(pairs, key=lambda p: p.value)
