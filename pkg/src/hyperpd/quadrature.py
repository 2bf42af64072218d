"""Quadrature engine shared by the transforms and special functions.

Two rules are provided:

* composite Gauss-Legendre panels with uniform level doubling, used for
  smooth (possibly oscillatory) integrands on finite intervals;
* tanh-sinh (double exponential) quadrature, used where an integrand has an
  integrable endpoint singularity.

Integrands are always evaluated on whole node arrays, never point by point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import ConvergenceError, TailError


@dataclass(frozen=True)
class EvalResult:
    """Value of a numerical evaluation together with an absolute error bound."""

    value: float
    abs_err: float

    def __iter__(self):
        yield self.value
        yield self.abs_err


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and truncation for a transform evaluation.

    ``r_max=None`` means the truncation radius is chosen automatically so the
    discarded tail stays below ``abs_tol / 10``.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    r_max: Optional[float] = None
    max_refinements: int = 10

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.r_max is not None and not self.r_max > 0:
            raise ValueError("r_max must be positive (or None for automatic)")
        if self.max_refinements < 1:
            raise ValueError("max_refinements must be at least 1")

    def target(self, value):
        return np.maximum(self.abs_tol, self.rel_tol * np.abs(value))

    def describe(self) -> str:
        r_max = "auto" if self.r_max is None else repr(self.r_max)
        return (f"abs_tol={self.abs_tol!r};rel_tol={self.rel_tol!r};"
                f"r_max={r_max};max_refinements={self.max_refinements}")


DEFAULT_CONFIG = QuadratureConfig()


@lru_cache(maxsize=None)
def gauss_legendre(order: int):
    """Nodes and weights of the ``order``-point Gauss-Legendre rule on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_rule(a: float, b: float, n_panels: int, order: int = 16):
    """Nodes and weights of ``n_panels`` equal Gauss-Legendre panels on [a, b]."""
    x, w = gauss_legendre(order)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def panel_quad(f: Callable, a: float, b: float, abs_tol: float = 1e-12,
               rel_tol: float = 1e-10, n_panels: int = 4, order: int = 16,
               max_levels: int = 10):
    """Integrate a vectorised ``f`` over [a, b] by panel doubling.

    ``f`` maps a 1-d node array to an array whose last axis matches the nodes;
    leading axes are integrated independently (e.g. one row per frequency).
    The error estimate is the difference between the last two levels.
    Returns ``(value, abs_err)`` with the shape of the leading axes.
    """
    if a == b:
        probe = np.asarray(f(np.array([a])))
        zero = np.zeros(probe.shape[:-1])
        return zero, zero
    prev = None
    for level in range(max_levels + 1):
        nodes, weights = composite_rule(a, b, n_panels << level, order)
        cur = np.asarray(f(nodes)) @ weights
        if prev is not None:
            err = np.abs(cur - prev)
            if np.all(err <= np.maximum(abs_tol, rel_tol * np.abs(cur))):
                return cur, err
        prev = cur
    raise ConvergenceError(
        f"panel quadrature on [{a}, {b}] did not converge in {max_levels} levels",
        value=cur, abs_err=err)


def tanh_sinh_rule(h: float, tau_max: float = 4.5):
    """Unit-interval tanh-sinh rule with step ``h``.

    Returns ``(x, da, db, w)``: nodes on [0, 1], their exact distances to the
    left and right endpoints, and weights.  Computing the distances directly
    from the transformation keeps full relative precision near the ends.
    """
    k = np.arange(-int(tau_max / h), int(tau_max / h) + 1)
    tau = k * h
    s = 0.5 * math.pi * np.sinh(tau)
    da = 1.0 / (1.0 + np.exp(-2.0 * s))
    db = 1.0 / (1.0 + np.exp(2.0 * s))
    w = h * 0.5 * math.pi * np.cosh(tau) * da * db * 2.0
    x = np.where(s < 0, da, 1.0 - db)
    return x, da, db, w


def tanh_sinh(f: Callable, a: float, b: float, abs_tol: float = 1e-12,
              rel_tol: float = 1e-10, max_level: int = 8,
              endpoint_distances: bool = False):
    """Double exponential quadrature of ``f`` over the finite interval [a, b].

    With ``endpoint_distances=True`` the integrand is called as
    ``f(x, x - a, b - x)`` so that singular factors such as ``(b - x)**-0.5``
    can be formed without cancellation.  Leading axes of ``f``'s output are
    integrated independently.  Returns ``(value, abs_err)``.
    """
    length = b - a
    prev = None
    for level in range(max_level + 1):
        h = 2.0 ** (-level)
        x, da, db, w = tanh_sinh_rule(h)
        keep = (da > 0) & (db > 0)
        x, da, db, w = x[keep], da[keep], db[keep], w[keep]
        nodes = a + length * x
        if endpoint_distances:
            vals = f(nodes, length * da, length * db)
        else:
            vals = f(nodes)
        vals = np.where(w > 0, vals, 0.0)
        cur = length * (np.asarray(vals) @ w)
        if prev is not None:
            err = np.abs(cur - prev)
            if level >= 3 and np.all(err <= np.maximum(abs_tol, rel_tol * np.abs(cur))):
                return cur, err
        prev = cur
    raise ConvergenceError(
        f"tanh-sinh quadrature on [{a}, {b}] did not converge",
        value=cur, abs_err=err)


def tail_cutoff(log_envelope: Callable, tol: float, start: float = 0.0,
                step: float = 0.25, cap: float = 1000.0, log_tol: Optional[float] = None):
    """Smallest grid point ``R >= start`` with ``integral_R^inf env < tol``.

    ``log_envelope`` returns the logarithm of a majorant of the integrand.
    The tail integral is bounded by left Riemann sums on a grid (an upper
    bound for decreasing envelopes) plus an exponential extrapolation past
    ``cap``.  Raises :class:`TailError` if the envelope is not decaying at
    ``cap`` or the tail is still too large there.  ``log_tol`` replaces
    ``tol`` when the tolerance itself would underflow.
    Returns ``(R, tail_bound)``.
    """
    if log_tol is None:
        log_tol = math.log(tol)
    grid = start + step * np.arange(int(math.ceil((cap - start) / step)) + 1)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        logs = np.asarray(log_envelope(grid), dtype=float)
    logs = np.where(np.isnan(logs), -np.inf, logs)
    if not np.isfinite(logs[-1]):
        log_beyond = -np.inf
    elif (rate := (logs[-2] - logs[-1]) / step) <= 0:
        raise TailError(f"integrand envelope does not decay by r={cap}")
    else:
        log_beyond = logs[-1] - math.log(rate)
    terms = logs + math.log(step)
    tails = np.logaddexp.accumulate(terms[::-1])[::-1]
    tails = np.logaddexp(tails, log_beyond)
    ok = np.nonzero(tails < log_tol)[0]
    if ok.size == 0:
        raise TailError(f"integrand tail exceeds exp({log_tol:.4g}) up to r={cap}")
    i = ok[0]
    return float(grid[i]), float(math.exp(tails[i]))
