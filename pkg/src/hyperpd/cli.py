"""Command-line entry point: ``python3 -m hyperpd <subcommand> ...``.

Every output starts with ``#`` comment lines holding the package version and
the fully resolved configuration, so a file can be regenerated from its own
header.  Exit codes: 0 success (or spectrally nonnegative), 2 non-PD witness,
3 inconclusive, 1 usage or runtime error.

Grids are written ``start:stop:step`` and expand to ``start + k*step`` for
``k = 0 .. ceil((stop - start)/step + 0.5) - 1``; the stop value is included
when it lies on the grid (up to half a step of rounding) and excluded otherwise.
A comma-separated list is taken literally; a single number is a one-point grid.
"""

from __future__ import annotations

import argparse
import io
import logging
import math
import sys
from typing import List, Optional, Sequence

import numpy as np

from . import __version__
from .certifier import INCONCLUSIVE, NON_PD, asymptotic_deviation, certify, sign_map
from .errors import HyperPDError
from .geometry import Space
from .gram_oracle import circle_gaussian_spectrum, min_eig_sym, circle_gram, witness_search
from .kernels import (Gaussian, HMDistribution, Sech, Wishart, gauss_density_h2, hm_density,
                      parse_profile)
from .quadrature import QuadratureConfig
from .transforms import closed_form_grid, forward_grid

EXIT_OK, EXIT_ERROR, EXIT_NON_PD, EXIT_INCONCLUSIVE = 0, 1, 2, 3

_FAMILIES = {"gaussian": Gaussian, "sech": Sech, "wishart": Wishart}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would collide with the NonPD code
    def error(self, message):
        raise UsageError(message)


def parse_grid(text: str) -> np.ndarray:
    if "," in text:
        try:
            return np.array([float(x) for x in text.split(",")])
        except ValueError:
            raise UsageError(f"bad list {text!r}") from None
    parts = text.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"bad grid {text!r}; expected start:stop:step") from None
    if len(nums) == 1:
        return np.array(nums)
    if len(nums) != 3:
        raise UsageError(f"bad grid {text!r}; expected start:stop:step")
    start, stop, step = nums
    if not step > 0 or stop < start:
        raise UsageError(f"grid {text!r} needs step > 0 and stop >= start")
    count = math.ceil((stop - start) / step + 0.5)
    return start + step * np.arange(count)


def _positive(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return x


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return n


def _key_values(text: str) -> dict:
    out = {}
    for item in text.split(","):
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"expected key=value, got {item!r}")
        try:
            out[key.strip().lower()] = float(val)
        except ValueError:
            raise UsageError(f"bad number in {item!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hyperpd", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"hyperpd {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, tolerances=True):
        sp.add_argument("--out", default="-", help="output path ('-' for stdout)")
        if tolerances:
            sp.add_argument("--abs-tol", type=_positive, default=1e-12)
            sp.add_argument("--rel-tol", type=_positive, default=1e-10)
            sp.add_argument("--r-max", type=_positive, default=None,
                            help="truncation radius (default: chosen from the tail bound)")

    sp = sub.add_parser("transform", help="tabulate fhat(t)")
    sp.add_argument("--space", type=Space.parse, required=True)
    sp.add_argument("--kernel", required=True)
    sp.add_argument("--t", default="0:10:0.1")
    sp.add_argument("--source", choices=("quadrature", "closed_form"), default="quadrature")
    common(sp)

    sp = sub.add_parser("certify", help="sign-criterion verdict")
    sp.add_argument("--space", type=Space.parse, required=True)
    sp.add_argument("--kernel", required=True)
    sp.add_argument("--tmax", type=_positive, default=30.0)
    sp.add_argument("--n-grid", type=_positive_int, default=200)
    sp.add_argument("--source", choices=("quadrature", "closed_form"), default="quadrature")
    common(sp)

    sp = sub.add_parser("signmap", help="sign of fhat over a (lambda, t) grid")
    sp.add_argument("--space", type=Space.parse, required=True)
    sp.add_argument("--kernel", default="gaussian", choices=sorted(_FAMILIES),
                    help="profile family; its parameter runs over --lambda")
    sp.add_argument("--lambda", dest="lam", default="0.3:5:0.1")
    sp.add_argument("--t", default="0:10:0.05")
    sp.add_argument("--workers", type=_positive_int, default=1)
    common(sp)

    sp = sub.add_parser("gram", help="random Gram-matrix witness search")
    sp.add_argument("--space", type=Space.parse, required=True)
    sp.add_argument("--kernel", required=True)
    sp.add_argument("--n", type=_positive_int, default=100)
    sp.add_argument("--trials", type=_positive_int, default=20)
    sp.add_argument("--radius", type=_positive, default=5.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=_positive_int, default=1)
    sp.add_argument("--dump-matrix", action="store_true",
                    help="append the Gram matrix of the worst configuration")
    common(sp, tolerances=False)

    sp = sub.add_parser("circle", help="circulant spectrum of the Gaussian on the circle")
    sp.add_argument("--lambda", dest="lam", type=_positive, required=True)
    sp.add_argument("--n", default="8,16,32,64,128", help="comma-separated point counts")
    sp.add_argument("--check", action="store_true", help="also run the dense eigensolver")
    common(sp, tolerances=False)

    sp = sub.add_parser("density", help="tabulate Herschel-Maxwell / Gaussian densities")
    sp.add_argument("--hm", default=None, help="n=<dim>,a=<exponent>")
    sp.add_argument("--gauss", default=None, help="lambda=<value> (H2 Gaussian density)")
    sp.add_argument("--r", default="0:4:0.01")
    common(sp, tolerances=False)

    sp = sub.add_parser("asymptotic", help="gap to the large-lambda expansion on H2")
    sp.add_argument("--lambda", dest="lam", default="50,100")
    sp.add_argument("--T", type=_positive, default=3.0)
    sp.add_argument("--n", type=_positive_int, default=61)
    common(sp)
    return p


def _config(args) -> Optional[QuadratureConfig]:
    if not hasattr(args, "abs_tol"):
        return None
    return QuadratureConfig(args.abs_tol, args.rel_tol, args.r_max)


def _header(args, argv: Sequence[str]) -> str:
    items = []
    for key in sorted(vars(args)):
        val = getattr(args, key)
        if isinstance(val, Space):
            val = val.name.lower()
        items.append(f"{key}={val!r}" if isinstance(val, float) else f"{key}={val}")
    q = _config(args)
    lines = [f"# hyperpd {__version__}", f"# argv: {' '.join(argv)}", "# " + " ".join(items)]
    if q is not None:
        lines.append(f"# quadrature: {q.describe()}")
    return "\n".join(lines) + "\n"


def _cmd_transform(args, out):
    profile = parse_profile(args.kernel)
    t = parse_grid(args.t)
    if args.source == "closed_form":
        s = closed_form_grid(args.space, profile, t)
    else:
        s = forward_grid(args.space, profile, t, _config(args))
    out.write(s.to_csv())
    return EXIT_OK


def _cmd_certify(args, out):
    v = certify(args.space, parse_profile(args.kernel), args.tmax, _config(args),
                source=args.source, n_grid=args.n_grid)
    out.write(v.to_line() + "\n")
    if v.status == NON_PD:
        return EXIT_NON_PD
    if v.status == INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _cmd_signmap(args, out):
    m = sign_map(args.space, parse_grid(args.lam), parse_grid(args.t), _config(args),
                 family=_FAMILIES[args.kernel], workers=args.workers)
    out.write(m.to_csv())
    for lam, t, msg in m.failures:
        out.write(f"# failed cell lambda={lam!r} t={t!r}: {msg}\n")
    return EXIT_OK


def _cmd_gram(args, out):
    profile = parse_profile(args.kernel)
    rep = witness_search(args.space, profile, args.n, args.trials, args.radius, args.seed,
                         workers=args.workers)
    out.write(rep.to_csv())
    if args.dump_matrix:
        out.write(rep.matrix_csv(profile))
    return EXIT_OK


def _cmd_circle(args, out):
    try:
        sizes = [int(x) for x in args.n.split(",")]
    except ValueError:
        raise UsageError(f"bad point counts {args.n!r}") from None
    out.write("lambda,N,min_eig,n_negative" + (",min_eig_dense" if args.check else "") + "\n")
    for N in sizes:
        mu = circle_gaussian_spectrum(args.lam, N)
        row = f"{args.lam!r},{N},{float(mu.min())!r},{int(np.sum(mu < 0))}"
        if args.check:
            row += f",{min_eig_sym(circle_gram(args.lam, N))!r}"
        out.write(row + "\n")
    return EXIT_OK


def _cmd_density(args, out):
    if args.hm is None and args.gauss is None:
        raise UsageError("density needs --hm and/or --gauss")
    r = parse_grid(args.r)
    cols, names = [r], ["r"]
    if args.hm is not None:
        kv = _key_values(args.hm)
        if set(kv) != {"n", "a"}:
            raise UsageError("--hm takes n=<dim>,a=<exponent>")
        dist = HMDistribution(int(kv["n"]), kv["a"])
        cols.append(hm_density(dist, r))
        names.append("hm")
    if args.gauss is not None:
        kv = _key_values(args.gauss)
        if set(kv) != {"lambda"}:
            raise UsageError("--gauss takes lambda=<value>")
        cols.append(gauss_density_h2(kv["lambda"], r))
        names.append("gauss")
    out.write(",".join(names) + "\n")
    for row in zip(*cols):
        out.write(",".join(repr(float(x)) for x in row) + "\n")
    return EXIT_OK


def _cmd_asymptotic(args, out):
    try:
        lams = [float(x) for x in args.lam.split(",")]
    except ValueError:
        raise UsageError(f"bad lambda list {args.lam!r}") from None
    out.write("lambda,T,deviation\n")
    for lam in lams:
        dev = asymptotic_deviation(lam, args.T, _config(args), n=args.n)
        out.write(f"{lam!r},{args.T!r},{dev!r}\n")
    return EXIT_OK


_COMMANDS = {"transform": _cmd_transform, "certify": _cmd_certify, "signmap": _cmd_signmap,
             "gram": _cmd_gram, "circle": _cmd_circle, "density": _cmd_density,
             "asymptotic": _cmd_asymptotic}


def run(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"hyperpd: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)

    buf = io.StringIO()
    buf.write(_header(args, argv))
    try:
        code = _COMMANDS[args.command](args, buf)
    except UsageError as exc:
        print(f"hyperpd: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (HyperPDError, ValueError, ArithmeticError) as exc:
        print(f"hyperpd: {args.command} failed: {exc}", file=sys.stderr)
        return EXIT_ERROR

    text = buf.getvalue()
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        if args.command == "certify":
            sys.stdout.write(text.splitlines()[-1] + "\n")
    return code


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
