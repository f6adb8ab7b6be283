"""Write a small set of example matrices and a curve manifest.

    python scripts/make_examples.py data/

produces ``h2like.mtx`` (2x2), ``diag123.mtx``, ``rand8.mtx`` (fixed
random 8x8) and ``scan/`` holding a five-point scaling curve with its
manifest ``scan/curve.txt``.
"""
import argparse
import os

import numpy as np

from qae.mmio import save_matrix


def random_symmetric(rng, n):
    a = rng.uniform(-1.0, 1.0, (n, n))
    return np.triu(a) + np.triu(a, 1).T


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("outdir")
    p.add_argument("--seed", type=int, default=77)
    args = p.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    os.makedirs(os.path.join(args.outdir, "scan"), exist_ok=True)
    save_matrix(os.path.join(args.outdir, "h2like.mtx"), np.array([[-1.1, 0.2], [0.2, -0.4]]))
    save_matrix(os.path.join(args.outdir, "diag123.mtx"), np.diag([1.0, 2.0, 3.0]))
    save_matrix(os.path.join(args.outdir, "rand8.mtx"), random_symmetric(rng, 8))

    # a one-parameter family A(t) = A0 + t*A1, the analogue of a bond scan
    a0, a1 = random_symmetric(rng, 4), random_symmetric(rng, 4)
    lines = ["# label path"]
    for t in np.linspace(0.0, 1.0, 5):
        name = f"t{t:.2f}"
        save_matrix(os.path.join(args.outdir, "scan", f"{name}.mtx"), a0 + t * a1)
        lines.append(f"{name} {name}.mtx")
    with open(os.path.join(args.outdir, "scan", "curve.txt"), "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote examples to {args.outdir}")


if __name__ == "__main__":
    main()
