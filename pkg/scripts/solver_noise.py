"""Spread of the ground-state estimate across seeds, per QUBO solver.

Compares the heuristic samplers with exact sub-solves on the same matrix:
exact enumeration has no seed dependence, the tabu-based ones may.
"""
import argparse

import numpy as np

from qae import EncodingConfig, QaeConfig, eigh_reference, ground_state, load_matrix
from qae.cli import SOLVERS, make_solver
from qae.solvers import TooLarge


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("matrix")
    p.add_argument("-K", "--qubits", type=int, default=10)
    p.add_argument("--runs", type=int, default=10)
    args = p.parse_args(argv)

    A = load_matrix(args.matrix)
    lam = eigh_reference(A).values[0]
    print(f"{'solver':>17} {'mean err':>11} {'std':>11}")
    for name in SOLVERS:
        solver = make_solver(name)
        try:
            errs = [
                ground_state(A, QaeConfig(enc=EncodingConfig(args.qubits), solver=solver, seed=s)).value - lam
                for s in range(args.runs)
            ]
        except TooLarge:
            print(f"{name:>17}  (too many variables for exact enumeration)")
            continue
        print(f"{name:>17} {np.mean(errs):11.3e} {np.std(errs):11.3e}")


if __name__ == "__main__":
    main()
