"""MatrixMarket coordinate I/O for real symmetric matrices."""
from __future__ import annotations

import numpy as np

from .core import QaeError, SymmetricMatrix, as_symmetric

HEADER = "%%MatrixMarket matrix coordinate real symmetric"


class ParseError(QaeError, ValueError):
    pass


class NotSymmetricHeader(ParseError):
    pass


class IndexOutOfBounds(ParseError):
    pass


def parse_matrix(text: str) -> SymmetricMatrix:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("%%MatrixMarket"):
        raise ParseError("missing %%MatrixMarket banner")
    banner = lines[0].split()
    if len(banner) != 5:
        raise ParseError(f"malformed banner: {lines[0]!r}")
    obj, fmt, field, sym = (t.lower() for t in banner[1:])
    if (obj, fmt) != ("matrix", "coordinate"):
        raise ParseError(f"unsupported object/format {obj} {fmt}")
    if field not in ("real", "integer"):
        raise ParseError(f"unsupported field {field}")
    if sym != "symmetric":
        raise NotSymmetricHeader(f"expected 'symmetric', got {sym!r}")

    body = [ln for ln in lines[1:] if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise ParseError("missing size line")
    try:
        rows, cols, nnz = (int(t) for t in body[0].split())
    except ValueError:
        raise ParseError(f"malformed size line: {body[0]!r}") from None
    if rows != cols or rows < 1:
        raise ParseError(f"symmetric matrix must be square and non-empty, got {rows}x{cols}")
    if len(body) - 1 != nnz:
        raise ParseError(f"header declares {nnz} entries, found {len(body) - 1}")

    a = np.zeros((rows, rows))
    seen = set()
    for ln in body[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ParseError(f"malformed entry: {ln!r}")
        try:
            i, j, val = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise ParseError(f"malformed entry: {ln!r}") from None
        if not (1 <= i <= rows and 1 <= j <= rows):
            raise IndexOutOfBounds(f"entry ({i}, {j}) outside a {rows}x{rows} matrix")
        if not np.isfinite(val):
            raise ParseError(f"non-finite entry: {ln!r}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise ParseError(f"duplicate entry for ({i}, {j})")
        seen.add(key)
        a[i - 1, j - 1] = val
        a[j - 1, i - 1] = val
    return SymmetricMatrix(a)


def load_matrix(path) -> SymmetricMatrix:
    with open(path) as fh:
        return parse_matrix(fh.read())


def format_matrix(A) -> str:
    a = np.asarray(as_symmetric(A))
    n = a.shape[0]
    entries = [(i, j, a[i, j]) for j in range(n) for i in range(j, n) if a[i, j] != 0.0]
    out = [HEADER, f"{n} {n} {len(entries)}"]
    out += [f"{i + 1} {j + 1} {float(v)!r}" for i, j, v in entries]
    return "\n".join(out) + "\n"


def save_matrix(path, A) -> None:
    with open(path, "w") as fh:
        fh.write(format_matrix(A))
