"""Smallest circulant eigenvalue of the Gaussian on N equally spaced circle points."""
import argparse

import numpy as np

from hyperpd.gram_oracle import circle_gaussian_spectrum


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lambdas", default="0.1,0.25,0.5,1,2,4")
    ap.add_argument("--sizes", default="4,8,16,32,64,128")
    args = ap.parse_args()
    lams = [float(x) for x in args.lambdas.split(",")]
    sizes = [int(x) for x in args.sizes.split(",")]
    print("lambda," + ",".join(f"N={n}" for n in sizes))
    for lam in lams:
        mins = [float(np.min(circle_gaussian_spectrum(lam, n))) for n in sizes]
        print(f"{lam:g}," + ",".join(f"{m:.3e}" for m in mins))


if __name__ == "__main__":
    main()
