"""Sign map of the Gaussian transform on H2 over a (lambda, t) grid.

Writes ``lambda,t,value,sign`` rows and prints one summary line per lambda
(first negative cell, count of +/-/0 cells).
"""
import argparse
import csv
import sys
from collections import defaultdict

from hyperpd.cli import run


def summarize(path):
    by_lam = defaultdict(list)
    with open(path) as fh:
        for row in csv.DictReader(line for line in fh if not line.startswith("#")):
            by_lam[float(row["lambda"])].append((float(row["t"]), row["sign"]))
    for lam, cells in by_lam.items():
        neg = [t for t, s in cells if s == "-"]
        first = f"{neg[0]:.3f}" if neg else "none"
        counts = {s: sum(1 for _, c in cells if c == s) for s in "+-0"}
        print(f"lambda={lam:<6g} first_negative_t={first:<8} "
              f"+:{counts['+']:4d} -:{counts['-']:4d} 0:{counts['0']:4d}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lambda", dest="lam", default="0.3:5:0.1")
    ap.add_argument("--t", default="0:10:0.05")
    ap.add_argument("--workers", type=int, default=4)
    ap.add_argument("--out", default="signmap_h2.csv")
    args = ap.parse_args()
    code = run(["signmap", "--space", "h2", "--kernel", "gaussian", "--lambda", args.lam,
                "--t", args.t, "--workers", str(args.workers), "--out", args.out])
    if code == 0:
        summarize(args.out)
    sys.exit(code)


if __name__ == "__main__":
    main()
