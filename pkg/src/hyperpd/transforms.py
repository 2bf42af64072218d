"""Spherical transforms of radial functions on H2 and H3.

Conventions (w is the radial volume density of :class:`Space`):

    H2:  fhat(t) = 2 pi int_0^inf g(r) P_{-1/2+it}(cosh r) sinh r dr
         g(r)    = (1/2 pi) int_0^inf fhat(t) P_{-1/2+it}(cosh r) t tanh(pi t) dt
    H3:  fhat(t) = (4 pi / t) int_0^inf g(r) sinh r sin(t r) dr
         g(r) sinh r = (1/2 pi^2) int_0^inf t fhat(t) sin(t r) dt

How the forward integrals are evaluated
---------------------------------------
H2.  Inserting the Mehler-Dirichlet integral for P and swapping the order
of integration over 0 < u < r < R gives

    fhat_R(t) = 2 sqrt(2) int_0^R cos(t u) A_R(u) du,
    A_R(u)    = int_u^R g(r) sinh r / sqrt(cosh r - cosh u) dr,

an ordinary cosine transform of a smooth, t-independent function.  A_R is
tabulated once (see :func:`_abel_kernel`) and reused for every t.

H3.  On the real axis the integrand g sinh r sin(tr)/t is integrated
directly.  When g continues analytically to a strip, the integral equals
int_0^inf Im h(r + iy) dr with h(z) = g(z) sinh(z) e^{itz} for any admissible
shift y; choosing y near the saddle point removes the cancellation that
otherwise limits accuracy to ~1e-16 relative to max|g sinh|.  This is what
makes relative accuracy possible on exponentially small values such as the
Gaussian transform at large t.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import specfun
from .errors import ConvergenceError, DomainError, SpectralTailError, TailError
from .geometry import Space
from .kernels import Gaussian, RadialProfile, Sech, parse_profile
from .kernels import closed_form as _closed_form
from .quadrature import DEFAULT_CONFIG, EvalResult, QuadratureConfig, composite_rule, panel_quad, tail_cutoff

__all__ = [
    "Space", "SpectralSamples", "forward", "forward_grid", "closed_form_grid", "inverse",
    "mgf_transform_h3", "plancherel_density", "lp_norm", "spectral_norm_sq",
    "noise_scale", "truncation_radius",
]

_LOG2 = math.log(2.0)


def _log_sinh(x):
    x = np.asarray(x, dtype=float)
    small = x < 20.0
    with np.errstate(divide="ignore"):
        return np.where(small, np.log(np.sinh(np.where(small, x, 1.0))),
                        x - _LOG2 + np.log1p(-np.exp(-2.0 * np.where(small, 20.0, x))))


def _log_sinh_complex(z):
    z = np.asarray(z, dtype=complex)
    big = z.real > 1.0
    zb = np.where(big, z, 2.0)
    zs = np.where(big, 0.5, z)
    with np.errstate(divide="ignore"):
        return np.where(big, zb - _LOG2 + np.log1p(-np.exp(-2.0 * zb)), np.log(np.sinh(zs)))


def plancherel_density(space: Space, t):
    """Spectral measure density: t tanh(pi t) on H2, t^2 / (2 pi^2) on H3."""
    t = np.asarray(t, dtype=float)
    if space is Space.H2:
        out = t * np.tanh(math.pi * t)
    else:
        out = t * t / (2.0 * math.pi ** 2)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------- samples

@dataclass(frozen=True, eq=False)
class SpectralSamples:
    """Transform values on a grid of spectral parameters.

    ``scale`` holds, per point, the magnitude (relative to t = 0) of the
    integrand on the contour that was used; it sets the noise floor for
    sign decisions.  It is 1 for real-axis quadrature.
    """

    space: Space
    t_grid: np.ndarray
    values: np.ndarray
    err: np.ndarray
    profile_descriptor: str
    scale: Optional[np.ndarray] = None
    config: str = ""
    source: str = "quadrature"

    def __post_init__(self):
        for name in ("t_grid", "values", "err"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = self.t_grid.shape[0]
        if self.values.shape != (n,) or self.err.shape != (n,):
            raise ValueError("t_grid, values and err must have equal lengths")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("spectral values must be finite")
        if np.any(np.diff(self.t_grid) <= 0):
            raise ValueError("t_grid must be strictly increasing")
        if np.any(self.err < 0):
            raise ValueError("error estimates must be nonnegative")
        scale = np.ones(n) if self.scale is None else np.asarray(self.scale, dtype=float)
        object.__setattr__(self, "scale", scale)

    def __len__(self):
        return self.t_grid.shape[0]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# space={self.space.name};profile={self.profile_descriptor};"
                  f"source={self.source};{self.config}\n")
        buf.write("t,fhat,err\n")
        for t, v, e in zip(self.t_grid, self.values, self.err):
            buf.write(f"{float(t)!r},{float(v)!r},{float(e)!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SpectralSamples":
        meta = {}
        rows = []
        for line in text.splitlines():
            if line.startswith("#"):
                for item in line[1:].strip().split(";"):
                    key, _, val = item.partition("=")
                    meta[key.strip()] = val.strip()
            elif line.strip() and not line.startswith("t,"):
                rows.append([float(x) for x in line.split(",")])
        arr = np.array(rows, dtype=float).reshape(-1, 3)
        space = Space.parse(meta.get("space", "H2"))
        desc = meta.get("profile", "")
        config = ";".join(f"{k}={v}" for k, v in meta.items()
                          if k not in ("space", "profile", "source"))
        try:
            scale = noise_scale(space, parse_profile(desc), arr[:, 0])
        except ValueError:
            scale = None
        return cls(space, arr[:, 0], arr[:, 1], arr[:, 2], desc, scale, config,
                   meta.get("source", "quadrature"))


# ---------------------------------------------------------------- truncation

def _log_abs(profile: RadialProfile, r):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(profile(r)))


def _require_bound(profile: RadialProfile):
    if profile.log_bound(np.array([0.0])) is None:
        raise TailError(f"{profile.descriptor()} has no tail bound; pass an explicit r_max")


def truncation_radius(space: Space, profile: RadialProfile, q: QuadratureConfig):
    """Radius R and a bound on the part of |fhat(t)| (uniform in t) beyond it.

    H2 uses |P_{-1/2+it}(cosh r)| <= P_{-1/2}(cosh r) <= (1 + r) e^{-r/2};
    H3 uses |sin(tr)/t| <= r.
    """
    if space is Space.H2:
        def env(r):
            return math.log(2 * math.pi) + profile.log_bound(r) + np.log1p(r) - 0.5 * r + _log_sinh(r)
    else:
        def env(r):
            with np.errstate(divide="ignore"):
                return math.log(4 * math.pi) + profile.log_bound(r) + _log_sinh(r) + np.log(r)
    if q.r_max is not None:
        if profile.log_bound(np.array([0.0])) is None:
            return q.r_max, 0.0
        grid = q.r_max + 0.25 * np.arange(4001)
        with np.errstate(over="ignore", invalid="ignore"):
            logs = np.asarray(env(grid))
        logs = np.where(np.isnan(logs), -np.inf, logs)
        return q.r_max, float(np.exp(np.logaddexp.reduce(logs + math.log(0.25))))
    _require_bound(profile)
    R, tail = tail_cutoff(env, q.abs_tol / 10.0, start=0.0, step=0.25)
    return max(R, 0.5), tail


# ---------------------------------------------------------------- H2

def _arcosh1p(delta):
    """arcosh(1 + delta) without cancellation for small delta."""
    return np.log1p(delta + np.sqrt(delta * (delta + 2.0)))


def _abel_kernel(profile: RadialProfile, u, R: float, n_panels: int):
    """A_R(u) = int_{cosh u}^{cosh R} g~(x) (x - cosh u)^{-1/2} dx with g~(cosh r) = g(r).

    With x - cosh u = w^2 on [0, 1] and = e^sigma beyond, both pieces are
    smooth for every u >= 0:

        A_R(u) = 2 int_0^{min(1, sqrt X)} g~(cosh u + w^2) dw
                 + int_0^{log X} g~(cosh u + e^sigma) e^{sigma/2} dsigma,

    where X = cosh R - cosh u.  ``n_panels`` Gauss-Legendre panels are used
    on each piece (mapped to the unit interval per node).
    """
    u = np.asarray(u, dtype=float)[:, None]
    xi, wt = composite_rule(0.0, 1.0, n_panels)
    # log X and cosh u - 1, all without overflow
    log_cu = _log_cosh_r(u)
    log_X = _log_sinh((R + u) / 2.0) + _log_sinh(np.maximum(R - u, 0.0) / 2.0) + _LOG2
    cm1 = 2.0 * np.sinh(np.minimum(u, 700.0) / 2.0) ** 2
    w_max = np.exp(0.5 * np.minimum(log_X, 0.0))
    w = w_max * xi[None, :]
    with np.errstate(over="ignore", invalid="ignore"):
        part1 = 2.0 * w_max[:, 0] * (profile(_arcosh1p(cm1 + w * w)) @ wt)
        sig_max = np.maximum(log_X, 0.0)
        sig = sig_max * xi[None, :]
        log_x = np.logaddexp(log_cu, sig)
        # r = arcosh(x); switch to log(2x) once 1/x^2 is below rounding
        r = np.where(log_x > 20.0, log_x + _LOG2, _arcosh1p(cm1 + np.exp(np.minimum(sig, 40.0))))
        vals = profile(r) * np.exp(0.5 * sig)
    vals = np.where(np.isfinite(vals), vals, 0.0)
    part2 = sig_max[:, 0] * (vals @ wt)
    return part1 + part2


def _log_cosh_r(x):
    x = np.abs(x)
    return x + np.log1p(np.exp(-2.0 * x)) - _LOG2


def _abel_converged(profile, u, R, q, n_panels):
    tol = q.abs_tol / (40.0 * R)
    A = _abel_kernel(profile, u, R, n_panels)
    for _ in range(q.max_refinements):
        n_panels *= 2
        A2 = _abel_kernel(profile, u, R, n_panels)
        d = float(np.max(np.abs(A2 - A)))
        A = A2
        if d <= max(tol, 1e-14 * float(np.max(np.abs(A)))):
            return A, n_panels // 2
    raise ConvergenceError("Abel kernel A_R(u) did not converge")


class _AbelInterpolant:
    """A_R(u) tabulated at Legendre nodes of panels of width <= 1 and
    evaluated elsewhere by barycentric interpolation inside each panel."""

    ORDER = 24

    def __init__(self, profile, R, q):
        n_sig = max(2, int(math.ceil(R / 4.0)))
        n_cells = max(1, int(math.ceil(R)))
        for _ in range(6):
            x, _ = np.polynomial.legendre.leggauss(self.ORDER)
            edges = np.linspace(0.0, R, n_cells + 1)
            half = 0.5 * (edges[1] - edges[0])
            mid = 0.5 * (edges[1:] + edges[:-1])
            nodes = (mid[:, None] + half * x[None, :])
            vals = np.concatenate([
                _abel_converged(profile, chunk, R, q, n_sig)[0]
                for chunk in np.array_split(nodes.ravel(), max(1, nodes.size // 2048))
            ]).reshape(nodes.shape)
            self.edges, self.half, self.mid, self.x, self.vals = edges, half, mid, x, vals
            bw = 1.0 / np.prod(x[:, None] - x[None, :] + np.eye(x.size), axis=1)
            self.bw = bw
            # check at points between the nodes of every panel
            probe = mid + 0.37 * half
            exact, _ = _abel_converged(profile, probe, R, q, n_sig)
            if np.max(np.abs(self(probe) - exact)) <= max(q.abs_tol / (40.0 * R),
                                                           1e-14 * np.max(np.abs(vals))):
                return
            n_cells *= 2
        raise ConvergenceError("Abel kernel interpolation did not converge")

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        cell = np.clip(((u - self.edges[0]) / (2 * self.half)).astype(int), 0, self.mid.size - 1)
        s = (u - self.mid[cell]) / self.half
        diff = s[:, None] - self.x[None, :]
        exact = diff == 0.0
        diff[exact] = 1.0
        c = self.bw[None, :] / diff
        out = np.sum(c * self.vals[cell], axis=1) / np.sum(c, axis=1)
        hit = exact.any(axis=1)
        if hit.any():
            out[hit] = self.vals[cell[hit]][exact[hit]]
        return out


def _h2_abel(profile: RadialProfile, t: np.ndarray, R: float, q: QuadratureConfig):
    tmax = max(1.0, float(np.max(t))) if t.size else 1.0
    n_outer = max(4, int(math.ceil(R / min(1.0, 4.0 / tmax))))
    A = _AbelInterpolant(profile, R, q)
    prev = None
    for level in range(q.max_refinements + 1):
        u, w = composite_rule(0.0, R, n_outer << level)
        cur = 2.0 * math.sqrt(2.0) * (np.cos(np.outer(t, u)) @ (w * A(u)))
        if prev is not None:
            err = np.abs(cur - prev)
            if np.all(err <= q.target(cur)):
                return cur, err
        prev = cur
    raise ConvergenceError("H2 transform did not converge", value=cur, abs_err=err)


def _h2_direct(profile: RadialProfile, t: np.ndarray, R: float, q: QuadratureConfig):
    """Cross-check route: integrate g(r) P(t, r) sinh r with P from conical_p."""
    def integrand(r):
        out = np.empty((t.size, r.size))
        for j, rj in enumerate(r):
            out[:, j] = specfun.conical_p_grid(t, rj, max(q.abs_tol / 100.0, 1e-15), q.rel_tol / 10.0)[0]
        return 2.0 * math.pi * out * (profile(r) * np.sinh(r))[None, :]

    n = max(4, int(math.ceil(R * max(1.0, float(np.max(t))) / 3.0)))
    return panel_quad(integrand, 0.0, R, q.abs_tol, q.rel_tol, n, max_levels=q.max_refinements)


# ---------------------------------------------------------------- H3

def _contour_log_envelope(profile: RadialProfile, r, y):
    z = r + 1j * y
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        return np.real(profile.log_complex(z) + _log_sinh_complex(z))


def _saddle_shift(profile: RadialProfile, t: float, R: float):
    """Shift y in [0, strip) minimising max_r log|g sinh|(r+iy) - t y.

    Returns ``(y, log_scale)`` where log_scale compares the optimised
    envelope with the real-axis one.
    """
    if profile.strip <= 0 or t <= 0:
        return 0.0, 0.0
    r = np.linspace(0.0, R + 2.0, 513)[1:]
    m0 = float(np.max(_contour_log_envelope(profile, r, 0.0)))

    def M(y):
        return float(np.max(_contour_log_envelope(profile, r, y))) - t * y

    if isinstance(profile, Gaussian):
        y = t / (2.0 * profile.lam)
    else:
        y_hi = 0.97 * profile.strip if math.isfinite(profile.strip) else 10.0 * t + 10.0
        grid = np.linspace(0.0, y_hi, 65)
        vals = np.array([M(y) for y in grid])
        k = int(np.argmin(vals))
        lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, grid.size - 1)]
        y = float(minimize_scalar(M, bounds=(lo, hi), method="bounded",
                                  options={"xatol": 1e-6}).x) if hi > lo else grid[k]
        if M(y) > vals[k]:
            y = float(grid[k])
    return y, M(y) - m0


def _h3_contour(profile: RadialProfile, t: float, y: float, R: float, log_scale: float,
                q: QuadratureConfig):
    # work in units of exp(log_scale) so tolerances never underflow
    log_pref = math.log(4.0 * math.pi / t) - log_scale

    def log_env(r):
        return log_pref + _contour_log_envelope(profile, r, y) - t * y

    R_c, tail = tail_cutoff(log_env, q.abs_tol / 10.0, start=0.0, step=0.25)
    R_c = max(R_c, 1.0)

    def integrand(r):
        z = r + 1j * y
        with np.errstate(over="ignore", under="ignore"):
            return np.imag(np.exp(log_pref + profile.log_complex(z) + _log_sinh_complex(z) + 1j * t * z))

    n = max(4, int(math.ceil(R_c * max(1.0, t) / 3.0)))
    val, err = panel_quad(integrand, 0.0, R_c, q.abs_tol, q.rel_tol, n,
                          max_levels=q.max_refinements)
    scale = math.exp(log_scale)
    return float(val) * scale, (float(err) + tail) * scale


def _h3_real(profile: RadialProfile, t: np.ndarray, R: float, q: QuadratureConfig):
    def integrand(r):
        # sin(t r)/t = r sinc(t r / pi), regular at t = 0
        return 4.0 * math.pi * (profile(r) * np.sinh(r) * r)[None, :] * np.sinc(np.outer(t, r) / math.pi)

    n = max(4, int(math.ceil(R * max(1.0, float(np.max(t))) / 3.0)))
    return panel_quad(integrand, 0.0, R, q.abs_tol, q.rel_tol, n, max_levels=q.max_refinements)


def noise_scale(space: Space, profile: RadialProfile, t) -> np.ndarray:
    """Per-point magnitude of the integrand actually summed, relative to t = 0.

    1 on H2 and for profiles without analytic continuation; on H3 it is
    exp(M(y*) - M(0)) for the contour shift y* used by the quadrature.
    """
    t = np.abs(np.atleast_1d(np.asarray(t, dtype=float)))
    if space is Space.H2 or profile.strip <= 0:
        return np.ones_like(t)
    R, _ = truncation_radius(space, profile, DEFAULT_CONFIG)
    return np.array([math.exp(min(0.0, _saddle_shift(profile, ti, R)[1])) for ti in t])


# ---------------------------------------------------------------- public API

def _forward_arrays(space: Space, profile: RadialProfile, t, q: QuadratureConfig,
                    method: str = "auto"):
    t = np.abs(np.atleast_1d(np.asarray(t, dtype=float)))
    if not np.all(np.isfinite(t)):
        raise ValueError("t must be finite")
    R, tail = truncation_radius(space, profile, q)
    scale = np.ones_like(t)
    if space is Space.H2:
        if method == "direct":
            val, err = _h2_direct(profile, t, R, q)
        elif method in ("auto", "abel"):
            val, err = _h2_abel(profile, t, R, q)
        else:
            raise ValueError(f"unknown H2 method {method!r}")
        return val, err + tail, scale
    val = np.empty_like(t)
    err = np.empty_like(t)
    shifts = [_saddle_shift(profile, ti, R) if method != "real" else (0.0, 0.0) for ti in t]
    real_idx = [i for i, (y, _) in enumerate(shifts) if y < 0.01]
    if real_idx:
        v, e = _h3_real(profile, t[real_idx], R, q)
        val[real_idx], err[real_idx] = v, e + tail
    for i, (y, log_scale) in enumerate(shifts):
        if y >= 0.01:
            val[i], err[i] = _h3_contour(profile, float(t[i]), y, R, min(log_scale, 0.0), q)
            scale[i] = math.exp(min(log_scale, 0.0))
    return val, err, scale


def forward(space: Space, profile: RadialProfile, t: float,
            q: QuadratureConfig = DEFAULT_CONFIG, method: str = "auto") -> EvalResult:
    """Spherical transform fhat(t) of ``profile`` on ``space`` (even in t)."""
    val, err, _ = _forward_arrays(space, profile, [t], q, method)
    return EvalResult(float(val[0]), float(err[0]))


def forward_grid(space: Space, profile: RadialProfile, t_grid: Sequence[float],
                 q: QuadratureConfig = DEFAULT_CONFIG, method: str = "auto") -> SpectralSamples:
    t = np.asarray(t_grid, dtype=float)
    val, err, scale = _forward_arrays(space, profile, t, q, method)
    return SpectralSamples(space, t, val, err, profile.descriptor(), scale, q.describe())


def closed_form_grid(space: Space, profile: RadialProfile, t_grid: Sequence[float]) -> SpectralSamples:
    """Closed-form transform on a grid; raises ValueError if there is none."""
    t = np.asarray(t_grid, dtype=float)
    vals = []
    for ti in t:
        v = _closed_form(space, profile, ti)
        if v is None:
            raise ValueError(f"no closed form for {profile.descriptor()} on {space.name}")
        vals.append(v)
    return SpectralSamples(space, t, np.array(vals), np.zeros_like(t), profile.descriptor(),
                           noise_scale(space, profile, t), "", "closed_form")


def _uniform_from_zero(t: np.ndarray) -> bool:
    if t.size < 3 or t[0] != 0.0:
        return False
    h = t[1] - t[0]
    return bool(np.all(np.abs(np.diff(t) - h) <= 1e-9 * h))


def _spectral_integral(t: np.ndarray, f: np.ndarray):
    """int_0^T f dt for an even, smooth integrand sampled at t, with error."""
    if _uniform_from_zero(t):
        h = t[1] - t[0]
        full = h * (np.sum(f) - 0.5 * (f[0] + f[-1]))
        m = (t.size - 1) // 2 * 2
        fine = h * (np.sum(f[:m + 1]) - 0.5 * (f[0] + f[m]))
        coarse = 2 * h * (np.sum(f[:m + 1:2]) - 0.5 * (f[0] + f[m]))
        return full, abs(fine - coarse)
    from scipy.integrate import simpson, trapezoid
    trap = trapezoid(f, t)
    return trap, abs(trap - simpson(f, x=t))


def inverse(space: Space, samples: SpectralSamples, r: float,
            q: QuadratureConfig = DEFAULT_CONFIG) -> EvalResult:
    """Reconstruct g(r) from spectral samples.

    Samples on a uniform grid starting at t = 0 are summed with the
    trapezoidal rule, which is spectrally accurate here because the
    integrand is even and analytic in t; other grids fall back to the
    trapezoidal rule with a Simpson comparison as error estimate.
    """
    if r < 0:
        raise ValueError("inverse needs r >= 0")
    if space is not samples.space:
        raise ValueError("samples belong to a different space")
    t = samples.t_grid
    if t.size < 3 or np.any(t < 0) or np.any(np.diff(t) <= 0):
        raise ValueError("inverse needs an increasing grid of t >= 0 with 3+ points")
    f = samples.values
    t_last = t[-1]
    tail = abs(f[-1]) * plancherel_density(space, t_last) * t_last
    if not tail < q.abs_tol:
        raise SpectralTailError(
            f"spectral tail not controlled: |fhat| alpha t = {tail:.3g} at t = {t_last:g}")
    alpha = plancherel_density(space, t)
    if space is Space.H2:
        P, P_err = specfun.conical_p_grid(t, r, q.abs_tol / 10.0, q.rel_tol)
        integrand = f * P * alpha / (2.0 * math.pi)
        sample_err = (samples.err * np.abs(P) + np.abs(f) * P_err) * alpha / (2.0 * math.pi)
    else:
        # phi_t(r) = sin(t r) / (t sinh r), with limit 1 at r = 0
        if r < 1e-8:
            phi = np.ones_like(t)
        else:
            phi = r * np.sinc(t * r / math.pi) / math.sinh(r)
        integrand = f * phi * alpha
        sample_err = samples.err * np.abs(phi) * alpha
    value, disc_err = _spectral_integral(t, integrand)
    prop_err, _ = _spectral_integral(t, sample_err)
    return EvalResult(float(value), float(disc_err + prop_err + tail))


def spectral_norm_sq(samples: SpectralSamples) -> float:
    """Spectral side of the Plancherel identity for int |g|^2 w dr.

    H2: (1/2 pi) int |fhat|^2 t tanh(pi t) dt;  H3: int |fhat|^2 t^2/(2 pi^2) dt.
    """
    t = samples.t_grid
    f2 = samples.values ** 2 * plancherel_density(samples.space, t)
    value, _ = _spectral_integral(t, f2)
    if samples.space is Space.H2:
        value /= 2.0 * math.pi
    return float(value)


def mgf_transform_h3(mgf: Callable, t: float) -> float:
    """H3 transform from the moment generating function G of the even extension of g:

        fhat(t) = (pi / t) Im{G(it + 1) - G(it - 1)}.
    """
    if not t > 0:
        raise DomainError("mgf_transform_h3 needs t > 0")
    try:
        g_plus = complex(mgf(complex(1.0, t)))
        g_minus = complex(mgf(complex(-1.0, t)))
    except (DomainError, ArithmeticError, ValueError) as exc:
        raise DomainError(f"MGF undefined at it +/- 1 for t = {t}: {exc}") from exc
    diff = g_plus - g_minus
    if not (math.isfinite(diff.real) and math.isfinite(diff.imag)):
        raise DomainError(f"MGF not finite at it +/- 1 for t = {t}")
    return math.pi / t * diff.imag


def lp_norm(space: Space, profile: RadialProfile, p: int,
            q: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """int_0^inf |g|^p w(r) dr, or ``math.inf`` when it diverges.

    Divergence is decided analytically for the sech family (H2: L2 needs
    a > 1/2, L1 needs a > 1; H3: L2 needs a > 1, L1 needs a > 2).
    """
    if p not in (1, 2):
        raise ValueError("p must be 1 or 2")
    if isinstance(profile, Sech):
        # |g|^p w ~ e^{(dim - 1 - p a) r}
        if p * profile.a <= space.dim - 1:
            return math.inf
    log_w = space.log_weight

    def env(r):
        return p * profile.log_bound(r) + log_w(r)

    if q.r_max is not None:
        R = q.r_max
    else:
        _require_bound(profile)
        R, _ = tail_cutoff(env, q.abs_tol / 10.0)
        R = max(R, 0.5)

    def integrand(r):
        with np.errstate(divide="ignore", under="ignore"):
            return np.exp(p * _log_abs(profile, r) + log_w(r))

    n = max(4, int(math.ceil(R / 2.0)))
    val, _ = panel_quad(integrand, 0.0, R, q.abs_tol, q.rel_tol, n, max_levels=q.max_refinements)
    return float(val)
