"""Herschel-Maxwell density (n=2, a=4) against the H2 Gaussian density (lambda=1.66)."""
import argparse
import sys

from hyperpd.cli import run

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="densities_h2.csv")
    ap.add_argument("--r", default="0:4:0.01")
    args = ap.parse_args()
    sys.exit(run(["density", "--hm", "n=2,a=4", "--gauss", "lambda=1.66", "--r", args.r,
                  "--out", args.out]))
