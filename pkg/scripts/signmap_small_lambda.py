"""Single-lambda slice of the H2 Gaussian transform for small lambda (default 0.05).

Small lambda is outside the range where the sign map is established, so the
script also reports the quadrature error estimate next to each value.
"""
import argparse

import numpy as np

from hyperpd import Gaussian, Space, forward_grid
from hyperpd.certifier import sign_threshold
from hyperpd.quadrature import QuadratureConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lambda", dest="lam", type=float, default=0.05)
    ap.add_argument("--tmax", type=float, default=3.0)
    ap.add_argument("--step", type=float, default=0.01)
    ap.add_argument("--out", default="signmap_small_lambda.csv")
    args = ap.parse_args()

    q = QuadratureConfig()
    t = np.arange(0.0, args.tmax + 0.5 * args.step, args.step)
    s = forward_grid(Space.H2, Gaussian(args.lam), t, q)
    eps = sign_threshold(s.values[0], q, s.scale)
    with open(args.out, "w") as fh:
        fh.write(f"# lambda={args.lam!r} {q.describe()}\n")
        fh.write("t,fhat,err,eps\n")
        for row in zip(t, s.values, s.err, eps):
            fh.write(",".join(repr(float(x)) for x in row) + "\n")
    neg = t[s.values < -eps]
    print(f"lambda={args.lam}: first robust negative t = {neg[0] if neg.size else 'none'}; "
          f"max err estimate {s.err.max():.2e}")


if __name__ == "__main__":
    main()
