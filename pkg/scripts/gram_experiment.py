"""Random Gram-matrix search over several kernels.

A negative minimum eigenvalue refutes positive-definiteness; nonnegative
results are only consistent with it.
"""
import argparse

from hyperpd import Space, parse_profile
from hyperpd.gram_oracle import witness_search

DEFAULT_KERNELS = [("h2", "sech:a=1"), ("h2", "sech:a=2"), ("h3", "sech:a=2"),
                   ("h2", "gaussian:lambda=1"), ("h3", "gaussian:lambda=1"),
                   ("h2", "wishart:a=0.5")]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--radius", type=float, default=5.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()

    print("space,kernel,min_eig,trace,ratio")
    for space, desc in DEFAULT_KERNELS:
        rep = witness_search(Space.parse(space), parse_profile(desc), args.n, args.trials,
                             args.radius, args.seed, workers=args.workers)
        print(f"{space},{desc},{rep.min_eig!r},{rep.trace!r},{rep.min_eig / rep.trace:.3e}")


if __name__ == "__main__":
    main()
