"""Command-line entry point.

Machine-readable records go to stdout as one JSON object per line; human
tables and diagnostics go to stderr.  Exit codes: 0 success, 2 usage or
input errors, 3 solver failures.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional

import numpy as np

from .core import EncodingConfig, QaeError, SymmetricMatrix
from .decomposer import DecomposingSolver
from .eigensolver import QaeConfig, spectrum
from .mmio import ParseError, load_matrix
from .records import CheckpointMismatch, Checkpointer, RunRecord, attach_reference
from .reference import eigh_reference
from .solvers import ExactSolver, TabuSolver

EXIT_OK, EXIT_USAGE, EXIT_SOLVER = 0, 2, 3
SOLVERS = ("tabu", "decomposed", "exact", "exact-decomposed")


class UsageError(Exception):
    pass


def make_solver(name: str, sub_size: Optional[int] = None, repeats: int = 50):
    if name == "tabu":
        return TabuSolver()
    if name == "exact":
        return ExactSolver()
    if name == "decomposed":
        return DecomposingSolver(sub_size or 64, repeats, TabuSolver())
    if name == "exact-decomposed":
        return DecomposingSolver(sub_size or 16, repeats, ExactSolver())
    raise UsageError(f"unknown solver {name!r}")


def make_config(args, seed: Optional[int] = None, K: Optional[int] = None) -> QaeConfig:
    try:
        return QaeConfig(
            enc=EncodingConfig(K if K is not None else args.qubits),
            solver=make_solver(args.solver, args.sub_size, args.repeats),
            seed=args.seed if seed is None else seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def derived_seed(base: int, index: int) -> int:
    return int(np.random.SeedSequence([base, index]).generate_state(1)[0])


def run_spectrum(
    A: SymmetricMatrix,
    n_states: int,
    cfg: QaeConfig,
    *,
    command: str = "spectrum",
    matrix_path: Optional[str] = None,
    label: Optional[str] = None,
    check: bool = False,
    checkpoint: Optional[str] = None,
) -> RunRecord:
    if not 1 <= n_states <= A.n:
        raise UsageError(f"--states must be between 1 and {A.n}, got {n_states}")
    t0 = time.perf_counter()
    config = cfg.describe()
    hooks = {}
    if checkpoint:
        ck = Checkpointer(checkpoint, A, config, n_states, cfg.seed)
        hooks = dict(ck.resume_kwargs(), on_step=ck.on_step, on_pair=ck.on_pair)
    pairs = spectrum(A, n_states, cfg, **hooks)
    rec = RunRecord(
        command=command,
        label=label,
        matrix_path=matrix_path,
        matrix_digest=A.digest(),
        n=A.n,
        config=config,
        seed=cfg.seed,
        eigenpairs=[p.to_dict() for p in pairs],
    )
    if command == "spectrum":
        rec.transitions = [p.value - pairs[0].value for p in pairs[1:]]
    if check:
        attach_reference(rec, eigh_reference(A).values)
    rec.wall_time = time.perf_counter() - t0
    return rec


def _emit(records: List[RunRecord], out: Optional[str]) -> None:
    lines = [r.to_json() for r in records]
    for ln in lines:
        print(ln)
    if out:
        with open(out, "w") as fh:
            fh.write("".join(ln + "\n" for ln in lines))


def _load(path: str) -> SymmetricMatrix:
    try:
        return load_matrix(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except (ParseError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_solve(args) -> int:
    A = _load(args.matrix)
    rec = run_spectrum(A, 1, make_config(args), command="solve", matrix_path=args.matrix,
                       check=args.check, checkpoint=args.checkpoint)
    _emit([rec], args.out)
    p = rec.eigenpairs[0]
    msg = f"value {p['value']:.10f}"
    if rec.errors:
        msg += f"  reference {rec.reference[0]:.10f}  error {rec.errors[0]:.3e}"
    print(msg, file=sys.stderr)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    A = _load(args.matrix)
    rec = run_spectrum(A, args.states, make_config(args), matrix_path=args.matrix,
                       check=args.check, checkpoint=args.checkpoint)
    _emit([rec], args.out)
    print(f"{'state':>5} {'value':>16} {'transition':>16}", file=sys.stderr)
    for k, p in enumerate(rec.eigenpairs):
        t = 0.0 if k == 0 else rec.transitions[k - 1]
        print(f"{k:>5} {p['value']:>16.10f} {t:>16.10f}", file=sys.stderr)
    return EXIT_OK


def read_manifest(path: str) -> List[tuple]:
    base = os.path.dirname(os.path.abspath(path))
    rows = []
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read manifest {path}: {exc.strerror}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 1)
        if len(parts) != 2:
            raise UsageError(f"{path}:{lineno}: expected 'label path'")
        label, mpath = parts[0], parts[1].strip()
        rows.append((label, mpath if os.path.isabs(mpath) else os.path.join(base, mpath)))
    return rows


def _curve_row(job):
    label, mpath, cfg = job
    try:
        A = _load(mpath)
        rec = run_spectrum(A, 1, cfg, command="curve", matrix_path=mpath, label=label, check=True)
        return rec, None, EXIT_OK
    except UsageError as exc:
        return None, str(exc), EXIT_USAGE
    except QaeError as exc:
        return None, f"{type(exc).__name__}: {exc}", EXIT_SOLVER


def cmd_curve(args) -> int:
    rows = read_manifest(args.manifest)
    jobs = [(label, path, make_config(args, seed=derived_seed(args.seed, i))) for i, (label, path) in enumerate(rows)]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_curve_row, jobs))
    else:
        results = [_curve_row(j) for j in jobs]

    code = EXIT_OK
    print(f"{'label':<16} {'qae':>16} {'reference':>16} {'error':>12}", file=sys.stderr)
    good = []
    for (label, _, _), (rec, err, rc) in zip(jobs, results):
        if rec is None:
            print(f"{label:<16} ERROR {err}", file=sys.stderr)
            code = max(code, rc)
            continue
        good.append(rec)
        v = rec.eigenpairs[0]["value"]
        print(f"{label:<16} {v:>16.10f} {rec.reference[0]:>16.10f} {rec.errors[0]:>12.3e}", file=sys.stderr)
    _emit(good, args.out)
    return code


def cmd_kscan(args) -> int:
    if args.k_min > args.k_max:
        raise UsageError(f"--k-min ({args.k_min}) exceeds --k-max ({args.k_max})")
    if args.k_min < 2:
        raise UsageError("--k-min must be at least 2")
    A = _load(args.matrix)
    ref = eigh_reference(A).values
    recs = []
    print(f"{'K':>3} {'value':>16} {'error':>12}", file=sys.stderr)
    for K in range(args.k_min, args.k_max + 1):
        rec = run_spectrum(A, 1, make_config(args, K=K), command="kscan", matrix_path=args.matrix)
        attach_reference(rec, ref)
        recs.append(rec)
        print(f"{K:>3} {rec.eigenpairs[0]['value']:>16.10f} {rec.errors[0]:>12.3e}", file=sys.stderr)
    _emit(recs, args.out)
    return EXIT_OK


def summarize(errors) -> dict:
    e = np.asarray(errors, dtype=float)
    return {
        "mean": float(np.mean(e)),
        "std": float(np.std(e)),
        "min": float(np.min(e)),
        "max": float(np.max(e)),
    }


def cmd_stats(args) -> int:
    if args.runs < 1:
        raise UsageError("--runs must be at least 1")
    A = _load(args.matrix)
    ref = eigh_reference(A).values
    recs = []
    for i in range(args.runs):
        rec = run_spectrum(A, 1, make_config(args, seed=derived_seed(args.seed, i)),
                           command="stats", matrix_path=args.matrix)
        recs.append(attach_reference(rec, ref))
    _emit(recs, args.out)
    summary = dict(version=1, command="stats-summary", matrix_digest=A.digest(), runs=args.runs,
                   **summarize([r.errors[0] for r in recs]))
    print(json.dumps(summary))
    print("mean {mean:.6e}  std {std:.6e}  min {min:.6e}  max {max:.6e}".format(**summary), file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--qubits", "-K", type=int, default=10, help="binary variables per vector element")
    common.add_argument("--solver", choices=SOLVERS, default="decomposed")
    common.add_argument("--sub-size", type=int, default=None,
                        help="subQUBO size (default 64; 16 for exact-decomposed)")
    common.add_argument("--repeats", type=int, default=50, help="non-improving decomposer passes before stopping")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="also write records to this file")

    parser = argparse.ArgumentParser(prog="qae", description="Annealer-style eigensolver on a classical QUBO stack")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="ground state of one matrix")
    p.add_argument("matrix")
    p.add_argument("--check", action="store_true", help="compare against the reference diagonalization")
    p.add_argument("--checkpoint", help="checkpoint file; resumes if it exists")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("spectrum", parents=[common], help="lowest N states by deflation")
    p.add_argument("matrix")
    p.add_argument("--states", "-N", type=int, required=True)
    p.add_argument("--check", action="store_true")
    p.add_argument("--checkpoint")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("curve", parents=[common], help="ground states over a manifest of matrices")
    p.add_argument("manifest")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("kscan", parents=[common], help="ground-state error versus K")
    p.add_argument("matrix")
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=14)
    p.set_defaults(func=cmd_kscan)

    p = sub.add_parser("stats", parents=[common], help="error spread over seeded repetitions")
    p.add_argument("matrix")
    p.add_argument("--runs", type=int, default=10)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CheckpointMismatch) as exc:
        print(f"qae: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QaeError as exc:
        print(f"qae: solver failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
