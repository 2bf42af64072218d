"""Hyperbolic plane and space in the hyperboloid model.

A point of d-dimensional hyperbolic space is stored as ``(x0, x1, ..., xd)``
with ``x0**2 - sum(xi**2) = 1`` and ``x0 >= 1``; the origin is ``(1, 0, ..., 0)``.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DimensionMismatch

NORMALIZATION_TOL = 1e-12


class Space(enum.Enum):
    """The two rank-one spaces for which transform pairs are implemented."""

    H2 = 2
    H3 = 3

    @property
    def dim(self) -> int:
        return self.value

    def weight(self, r):
        """Radial volume density: 2 pi sinh r on H2, 4 pi sinh^2 r on H3."""
        r = np.asarray(r, dtype=float)
        if self is Space.H2:
            return 2.0 * math.pi * np.sinh(r)
        return 4.0 * math.pi * np.sinh(r) ** 2

    def log_weight(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            log_sinh = r + np.log(-np.expm1(-2.0 * r)) - math.log(2.0)
        if self is Space.H2:
            return math.log(2.0 * math.pi) + log_sinh
        return math.log(4.0 * math.pi) + 2.0 * log_sinh

    @classmethod
    def parse(cls, text: str) -> "Space":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown space {text!r} (expected h2 or h3)") from None


@dataclass(frozen=True)
class HPoint:
    coords: tuple

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) not in (3, 4):
            raise DimensionMismatch("only H2 and H3 points are supported")
        x = np.asarray(coords)
        if x[0] < 1.0 - NORMALIZATION_TOL:
            raise ValueError("hyperboloid points need x0 >= 1")
        # relative check: x0^2 itself can be large far from the origin
        if abs(minkowski(x, x) - 1.0) > NORMALIZATION_TOL * max(1.0, x[0] ** 2):
            raise ValueError("point is not on the unit hyperboloid")

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coords)

    @classmethod
    def from_array(cls, x) -> "HPoint":
        return cls(tuple(np.asarray(x, dtype=float)))


def minkowski(x, y):
    """Lorentzian product x0 y0 - sum xi yi along the last axis."""
    x = np.asarray(x)
    y = np.asarray(y)
    return x[..., 0] * y[..., 0] - np.sum(x[..., 1:] * y[..., 1:], axis=-1)


def origin(dim: int) -> HPoint:
    return HPoint((1.0,) + (0.0,) * dim)


def polar_point(r: float, direction: Sequence[float]) -> HPoint:
    """Point at distance ``r`` from the origin in the (unit) ``direction``."""
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    return HPoint((math.cosh(r),) + tuple(math.sinh(r) * u))


def _arcosh_gram(x, y):
    # arcosh(<x,y>) loses precision near 1; use the chordal form instead
    diff = np.asarray(x) - np.asarray(y)
    q = -minkowski(diff, diff)  # = 2(<x,y> - 1) >= 0
    q = np.maximum(q, 0.0)
    return 2.0 * np.arcsinh(0.5 * np.sqrt(q))


def distance(p: HPoint, q: HPoint) -> float:
    """Geodesic distance arcosh(<p, q>)."""
    if p.dim != q.dim:
        raise DimensionMismatch(f"cannot compare H{p.dim} and H{q.dim} points")
    return float(_arcosh_gram(p.as_array(), q.as_array()))


def distance_matrix(coords: np.ndarray) -> np.ndarray:
    """Pairwise distances for an ``(n, d+1)`` array of hyperboloid points."""
    x = np.asarray(coords, dtype=float)
    return _arcosh_gram(x[:, None, :], x[None, :, :])


def lobachevsky_point(u: float, v: float) -> HPoint:
    """H2 point with Lobachevsky coordinates (u, v): go ``u`` along the first
    axis, then ``v`` along the perpendicular geodesic.  cosh d(o,p) = cosh u cosh v."""
    return HPoint((math.cosh(u) * math.cosh(v), math.sinh(u) * math.cosh(v), math.sinh(v)))


def circle_angles(n: int) -> List[float]:
    """``n`` equally spaced angles 2 pi k / n on the unit circle."""
    if n < 2:
        raise ValueError("need at least two points on the circle")
    return [2.0 * math.pi * k / n for k in range(n)]


def circle_distance(a: float, b: float) -> float:
    d = abs(a - b) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


@dataclass(frozen=True)
class PointSet:
    points: tuple
    seed: int = 0
    radius_bound: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        dims = {p.dim for p in self.points}
        if len(dims) > 1:
            raise DimensionMismatch("points of a PointSet must share a dimension")
        o = None
        for p in self.points:
            o = o or origin(p.dim)
            if distance(o, p) > self.radius_bound * (1 + 1e-12) + 1e-12:
                raise ValueError("point lies outside radius_bound")

    def __len__(self):
        return len(self.points)

    @property
    def dim(self) -> int:
        return self.points[0].dim

    def coords(self) -> np.ndarray:
        return np.array([p.coords for p in self.points])

    def subset(self, indices: Iterable[int]) -> "PointSet":
        return PointSet(tuple(self.points[i] for i in indices), self.seed, self.radius_bound)

    def to_csv(self) -> str:
        """CSV text: a ``#`` comment line with seed and radius, then
        ``dim,x0,x1,...`` and one row per point (``repr`` floats, '.' decimal)."""
        buf = io.StringIO()
        d = self.dim if self.points else 0
        buf.write(f"# seed={self.seed} radius_bound={self.radius_bound!r}\n")
        buf.write("dim," + ",".join(f"x{i}" for i in range(d + 1)) + "\n")
        for p in self.points:
            buf.write(f"{d}," + ",".join(repr(c) for c in p.coords) + "\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "PointSet":
        seed, radius = 0, math.inf
        points = []
        for line in text.splitlines():
            if not line.strip():
                continue
            if line.startswith("#"):
                for item in line[1:].split():
                    key, _, val = item.partition("=")
                    if key == "seed":
                        seed = int(val)
                    elif key == "radius_bound":
                        radius = float(val)
                continue
            if line.startswith("dim"):
                continue
            fields = line.split(",")
            dim = int(fields[0])
            coords = tuple(float(v) for v in fields[1:])
            if len(coords) != dim + 1:
                raise DimensionMismatch("row length does not match its dim column")
            points.append(HPoint(coords))
        return cls(tuple(points), seed, radius)


def _radial_sample(dim: int, R: float, u: np.ndarray) -> np.ndarray:
    if dim == 2:
        # CDF (cosh r - 1) / (cosh R - 1); invert in a cancellation-free form
        return 2.0 * np.arcsinh(np.sqrt(u) * math.sinh(0.5 * R))
    # dim 3: CDF proportional to sinh(2r)/2 - r, inverted numerically
    def cdf(r):
        return 0.5 * math.sinh(2 * r) - r

    total = cdf(R)
    out = np.empty_like(u)
    for i, ui in enumerate(u):
        target = ui * total
        if target <= 0:
            out[i] = 0.0
        elif ui >= 1.0:
            out[i] = R
        else:
            out[i] = brentq(lambda r: cdf(r) - target, 0.0, R, xtol=1e-15, rtol=1e-15)
    return out


def sample_ball(dim: int, R: float, n: int, seed: int) -> PointSet:
    """``n`` points uniform w.r.t. hyperbolic volume in the ball of radius ``R``.

    Radii follow the density proportional to sinh^{dim-1}(r) on [0, R]
    (inverse CDF), directions are uniform on the sphere.  Randomness comes
    from a PCG64 generator seeded with ``seed`` only.
    """
    if dim not in (2, 3):
        raise DimensionMismatch("sample_ball supports dim 2 and 3")
    if not R > 0 or n < 1:
        raise ValueError("need R > 0 and n >= 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random(n)
    g = rng.standard_normal((n, dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = np.minimum(_radial_sample(dim, R, u), R)
    pts = []
    for ri, di in zip(r, g):
        pts.append(HPoint((math.cosh(ri),) + tuple(math.sinh(ri) * di)))
    return PointSet(tuple(pts), seed, R)


def boost(dim: int, axis: int, s: float) -> np.ndarray:
    """Lorentz boost of rapidity ``s`` mixing x0 with x_axis (an isometry)."""
    m = np.eye(dim + 1)
    m[0, 0] = m[axis, axis] = math.cosh(s)
    m[0, axis] = m[axis, 0] = math.sinh(s)
    return m


def rotation(dim: int, i: int, j: int, angle: float) -> np.ndarray:
    """Rotation in the (x_i, x_j) spatial plane; fixes the origin."""
    m = np.eye(dim + 1)
    c, s = math.cos(angle), math.sin(angle)
    m[i, i] = m[j, j] = c
    m[i, j], m[j, i] = -s, s
    return m


def apply(matrix: np.ndarray, p: HPoint) -> HPoint:
    return HPoint.from_array(matrix @ p.as_array())
