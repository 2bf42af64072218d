"""Gram-matrix checks of positive-definiteness.

A negative eigenvalue of [k(x_i, x_j)] for any finite configuration refutes
positive-definiteness; nonnegative eigenvalues on sampled configurations
prove nothing.  The eigensolver is a cyclic Jacobi method, independent of
LAPACK, so that it can serve as a separate oracle.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConvergenceError, DimensionMismatch, SymmetryError
from .geometry import PointSet, Space, circle_angles, distance_matrix, sample_ball
from .kernels import RadialProfile

SYMMETRY_TOL = 1e-12


def gram(points: PointSet, space: Space, profile: RadialProfile) -> np.ndarray:
    """G[i, j] = g(d(p_i, p_j))."""
    if len(points) == 0:
        raise ValueError("gram needs at least one point")
    if points.dim != space.dim:
        raise DimensionMismatch(f"points are H{points.dim}, space is {space.name}")
    d = distance_matrix(points.coords())
    g = profile(d)
    return 0.5 * (g + g.T)


def _round_robin(n: int):
    """n - 1 rounds of n/2 disjoint pairs covering every pair once (n even)."""
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        half = n // 2
        rounds.append((np.array(players[:half]), np.array(players[half:][::-1])))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_eigenvalues(m, tol: float = 1e-15, max_sweeps: int = 60) -> np.ndarray:
    """All eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, in rounds of disjoint
    pairs (a round-robin schedule) so that one round is a single vectorised
    update.  Stops when the off-diagonal Frobenius norm drops below
    ``tol`` times the Frobenius norm of the matrix.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    n = a.shape[0]
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if np.max(np.abs(a - a.T), initial=0.0) > SYMMETRY_TOL * scale:
        raise SymmetryError("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    if n == 1:
        return a.diagonal().copy()
    if n % 2:
        # a decoupled dummy row/column keeps the schedule perfect
        a = np.pad(a, ((0, 1), (0, 1)))
    size = a.shape[0]
    rounds = _round_robin(size)
    total = np.linalg.norm(a)
    offdiag = ~np.eye(size, dtype=bool)
    rotated = True
    for _ in range(max_sweeps):
        # summed directly: ||a||^2 - ||diag||^2 cancels once off < 1e-8 ||a||
        off = float(np.linalg.norm(a[offdiag]))
        if off <= tol * total or not rotated:
            ev = a.diagonal().copy()
            # the padded row never couples (its a[p, q] stay 0), so drop it
            return np.sort(ev[:n])
        rotated = False
        for p, q in rounds:
            apq = a[p, q]
            app, aqq = a[p, p], a[q, q]
            # entries negligible against both diagonals are dropped, as in
            # Rutishauser's threshold scheme; otherwise sweeps can stall at rounding level
            negligible = np.abs(apq) <= 1e-17 * (np.abs(app) + np.abs(aqq)) + 1e-300 * scale
            a[p[negligible], q[negligible]] = 0.0
            a[q[negligible], p[negligible]] = 0.0
            active = ~negligible
            if not np.any(active):
                continue
            rotated = True
            apq = np.where(active, apq, 0.0)
            with np.errstate(divide="ignore", invalid="ignore"):
                theta = np.where(active, (aqq - app) / (2.0 * apq), 0.0)
                tt = np.where(active, np.sign(theta) / (np.abs(theta) + np.hypot(1.0, theta)), 0.0)
            tt = np.where(active & (theta == 0.0), 1.0, tt)
            c = 1.0 / np.sqrt(1.0 + tt * tt)
            s = tt * c
            rp, rq = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * rp - s[:, None] * rq
            a[q, :] = s[:, None] * rp + c[:, None] * rq
            cp, cq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = cp * c[None, :] - cq * s[None, :]
            a[:, q] = cp * s[None, :] + cq * c[None, :]
            # the rotation zeroes these entries exactly in exact arithmetic
            a[p, q] = 0.0
            a[q, p] = 0.0
    raise ConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def min_eig_sym(m) -> float:
    """Smallest eigenvalue of a symmetric matrix (cyclic Jacobi)."""
    return float(jacobi_eigenvalues(m)[0])


@dataclass(frozen=True)
class GramReport:
    n_points: int
    trials: int
    min_eig: float
    best_config: PointSet
    kernel_descriptor: str
    seed: int
    best_trial: int
    trace: float
    space: Space = Space.H2

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("space,kernel,n_points,trials,seed,best_trial,min_eig,trace\n")
        buf.write(f"{self.space.name},{self.kernel_descriptor},{self.n_points},{self.trials},"
                  f"{self.seed},{self.best_trial},{self.min_eig!r},{self.trace!r}\n")
        return buf.getvalue()

    def matrix_csv(self, profile: RadialProfile) -> str:
        """Full Gram matrix of the best configuration as ``i,j,value`` rows."""
        g = gram(self.best_config, self.space, profile)
        buf = io.StringIO()
        buf.write("i,j,value\n")
        for i in range(g.shape[0]):
            for j in range(g.shape[1]):
                buf.write(f"{i},{j},{float(g[i, j])!r}\n")
        return buf.getvalue()


def witness_search(space: Space, profile: RadialProfile, n: int, trials: int, R: float,
                   seed: int, workers: int = 1) -> GramReport:
    """Most negative Gram eigenvalue over ``trials`` random configurations.

    Trial k samples ``n`` points uniformly in the ball of radius ``R`` with
    seed ``seed + k``; ties keep the earliest trial, so the report does not
    depend on ``workers``.
    """
    if n < 2 or trials < 1:
        raise ValueError("need n >= 2 and trials >= 1")

    def run(k):
        pts = sample_ball(space.dim, R, n, seed + k)
        g = gram(pts, space, profile)
        return min_eig_sym(g), pts, float(np.trace(g))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, range(trials)))
    else:
        results = [run(k) for k in range(trials)]
    best = min(range(trials), key=lambda k: (results[k][0], k))
    lam, pts, tr = results[best]
    return GramReport(n, trials, lam, pts, profile.descriptor(), seed, best, tr, space)


def circle_gram(lam: float, N: int) -> np.ndarray:
    theta = np.asarray(circle_angles(N))
    d = np.abs(theta[:, None] - theta[None, :])
    d = np.minimum(d, 2.0 * math.pi - d)
    return np.exp(-lam * d * d)


def circle_gaussian_spectrum(lam: float, N: int) -> np.ndarray:
    """Eigenvalues of the Gaussian Gram matrix on N equally spaced circle points.

    The matrix is circulant with symmetric first row c_j = exp(-lam d_j^2),
    so its eigenvalues are mu_k = sum_j c_j cos(2 pi j k / N), k = 0..N-1
    (direct cosine sums, no FFT).
    """
    if not lam > 0:
        raise ValueError("lambda must be positive")
    if N < 2:
        raise ValueError("need N >= 2")
    j = np.arange(N)
    d = np.minimum(j, N - j) * (2.0 * math.pi / N)
    c = np.exp(-lam * d * d)
    k = np.arange(N)
    # reduce jk mod N before scaling so the cosine arguments stay small
    return np.cos(2.0 * math.pi * ((np.outer(k, j) % N) / N)) @ c
