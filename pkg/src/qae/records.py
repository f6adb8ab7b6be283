"""Run records (line-delimited JSON) and checkpoint files."""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import asdict, dataclass, field, fields
from typing import Any, List, Optional

import numpy as np

from .core import Eigenpair, QaeError, SymmetricMatrix
from .eigensolver import LambdaSearchState

SCHEMA_VERSION = 1


class CheckpointMismatch(QaeError):
    pass


@dataclass
class RunRecord:
    """One solver run.

    Fields, in output order: ``version``, ``command``, ``label``,
    ``matrix_path``, ``matrix_digest``, ``n``, ``config``, ``seed``,
    ``eigenpairs`` (value, vector, lambda_star, meta), ``transitions``
    (``value_k - value_0``, spectrum runs only), ``reference`` (reference
    eigenvalues when checked), ``errors`` (``value_k - reference_k``) and
    ``wall_time`` in seconds.  Absent blocks are ``null``.
    """

    command: str
    matrix_path: Optional[str]
    matrix_digest: str
    n: int
    config: dict
    seed: int
    eigenpairs: List[dict]
    label: Optional[str] = None
    transitions: Optional[List[float]] = None
    reference: Optional[List[float]] = None
    errors: Optional[List[float]] = None
    wall_time: float = 0.0
    version: int = SCHEMA_VERSION

    _ORDER = (
        "version", "command", "label", "matrix_path", "matrix_digest", "n", "config", "seed",
        "eigenpairs", "transitions", "reference", "errors", "wall_time",
    )

    def to_dict(self) -> dict:
        d = asdict(self)
        return {k: d[k] for k in self._ORDER}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    @classmethod
    def from_dict(cls, d: dict) -> "RunRecord":
        names = {f.name for f in fields(cls)}
        extra = set(d) - names
        missing = names - set(d)
        if extra or missing:
            raise ValueError(f"record schema mismatch: extra={sorted(extra)} missing={sorted(missing)}")
        if d["version"] != SCHEMA_VERSION:
            raise ValueError(f"unsupported record version {d['version']}")
        return cls(**d)

    @classmethod
    def from_json(cls, line: str) -> "RunRecord":
        return cls.from_dict(json.loads(line))

    def pairs(self) -> List[Eigenpair]:
        return [Eigenpair.from_dict(p) for p in self.eigenpairs]


def attach_reference(rec: RunRecord, ref_values) -> RunRecord:
    k = len(rec.eigenpairs)
    ref = [float(v) for v in np.asarray(ref_values)[:k]]
    rec.reference = ref
    rec.errors = [p["value"] - r for p, r in zip(rec.eigenpairs, ref)]
    return rec


@dataclass
class Checkpoint:
    matrix_digest: str
    config: dict
    n_states: int
    completed: List[dict] = field(default_factory=list)
    deflated: Optional[List[List[float]]] = None
    search: Optional[dict] = None
    rng: dict = field(default_factory=dict)
    version: int = SCHEMA_VERSION

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "Checkpoint":
        d = json.loads(text)
        if d.get("version") != SCHEMA_VERSION:
            raise CheckpointMismatch(f"unsupported checkpoint version {d.get('version')}")
        return cls(**d)

    def completed_pairs(self) -> List[Eigenpair]:
        return [Eigenpair.from_dict(p) for p in self.completed]

    def deflated_matrix(self) -> Optional[SymmetricMatrix]:
        return None if self.deflated is None else SymmetricMatrix(np.array(self.deflated))

    def search_state(self) -> Optional[LambdaSearchState]:
        return None if self.search is None else LambdaSearchState.from_dict(self.search)


def write_atomic(path, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".ckpt-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class Checkpointer:
    """Persists spectrum progress to ``path`` and restores it on the next run.

    The file is rewritten after every bisection step and every completed
    eigenpair.  A checkpoint for a different matrix or configuration is
    refused rather than silently ignored.
    """

    def __init__(self, path, A: SymmetricMatrix, config: dict, n_states: int, seed: int):
        self.path = path
        self.ckpt = Checkpoint(A.digest(), config, n_states, rng={"seed": seed})

    def load(self) -> Optional[Checkpoint]:
        if not os.path.exists(self.path):
            return None
        with open(self.path) as fh:
            old = Checkpoint.from_json(fh.read())
        for name in ("matrix_digest", "config", "n_states"):
            if getattr(old, name) != getattr(self.ckpt, name):
                raise CheckpointMismatch(f"checkpoint {self.path} was written for a different {name}")
        self.ckpt = old
        return old

    def _save(self) -> None:
        write_atomic(self.path, self.ckpt.to_json())

    def on_step(self, k: int, state: LambdaSearchState) -> None:
        self.ckpt.search = state.to_dict()
        self.ckpt.rng = {"seed": self.ckpt.rng.get("seed"), "stream": k, "solves": state.solves}
        self._save()

    def on_pair(self, pairs: List[Eigenpair], deflated: SymmetricMatrix) -> None:
        self.ckpt.completed = [p.to_dict() for p in pairs]
        self.ckpt.deflated = np.asarray(deflated).tolist()
        self.ckpt.search = None
        self.ckpt.rng = {"seed": self.ckpt.rng.get("seed"), "stream": len(pairs), "solves": 0}
        self._save()

    def resume_kwargs(self) -> dict[str, Any]:
        old = self.load()
        if old is None:
            return {}
        return {
            "completed": old.completed_pairs(),
            "deflated": old.deflated_matrix(),
            "state": old.search_state(),
        }
