"""Error against bits per element, averaged over seeds, for one matrix.

Prints a table of mean/min/max error versus K; the error should fall
steeply up to K of about 10 and then level off.
"""
import argparse

import numpy as np

from qae import EncodingConfig, QaeConfig, eigh_reference, ground_state, load_matrix


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("matrix", help="MatrixMarket file")
    p.add_argument("--k-min", type=int, default=4)
    p.add_argument("--k-max", type=int, default=14)
    p.add_argument("--seeds", type=int, default=5)
    args = p.parse_args(argv)

    A = load_matrix(args.matrix)
    lam = eigh_reference(A).values[0]
    print(f"reference lambda_min = {lam:.10f}")
    print(f"{'K':>3} {'mean err':>11} {'min err':>11} {'max err':>11}")
    for K in range(args.k_min, args.k_max + 1):
        errs = [ground_state(A, QaeConfig(enc=EncodingConfig(K), seed=s)).value - lam for s in range(args.seeds)]
        print(f"{K:>3} {np.mean(errs):11.3e} {np.min(errs):11.3e} {np.max(errs):11.3e}")


if __name__ == "__main__":
    main()
