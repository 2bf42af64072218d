"""Special functions: complex log-Gamma, Gamma product identities, erf,
K_{i tau}(x) and the conical Legendre functions P_{-1/2+it}(cosh r).

Complex arguments are plain Python ``complex`` values.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import ConvergenceError, PoleError, SingularityError
from .quadrature import EvalResult, panel_quad, tanh_sinh

__all__ = [
    "EvalResult", "log_gamma", "gamma_abs_sq", "gamma_pair_product", "erf",
    "bessel_k_imag", "bessel_k_imag_grid", "conical_p", "conical_p_grid",
]

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _check_pole(z: complex):
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleError(f"Gamma has a pole at z = {z.real:g}")


def _log_gamma_lanczos(z: complex) -> complex:
    # valid for re(z) >= 0.5
    z = z - 1.0
    x = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        x += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def _expm1_complex(w: complex) -> complex:
    # e^w - 1 without cancellation for small |w|
    x, y = w.real, w.imag
    re = math.expm1(x) * math.cos(y) - 2.0 * math.sin(0.5 * y) ** 2
    return complex(re, math.exp(x) * math.sin(y))


def log_gamma(z) -> complex:
    """Principal branch of log Gamma(z).

    Lanczos approximation for ``re(z) >= 0.5``.  For ``re(z) < 0.5`` the
    reflection formula is used with the branch of log sin(pi z) that is
    analytic in the upper half-plane,

        log sin(pi z) = -i pi z + i pi/2 - log 2 + log(1 - exp(2 pi i z)),

    which makes the result continuous off the negative real axis and equal
    to the real log|Gamma| on re(z) = 1/2 mirror pairs.  The lower half-plane
    follows by conjugate symmetry; on the negative real axis the limit from
    above is returned.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("log_gamma requires a finite argument")
    _check_pole(z)
    if z.imag < 0.0:
        return log_gamma(z.conjugate()).conjugate()
    if z.real >= 0.5:
        return _log_gamma_lanczos(z)
    log_sin = (-1j * math.pi * z + 0.5j * math.pi - math.log(2.0)
               + cmath.log(-_expm1_complex(2j * math.pi * z)))
    return math.log(math.pi) - log_sin - _log_gamma_lanczos(1.0 - z)


def gamma_abs_sq(z) -> float:
    """|Gamma(z)|^2, computed as exp(2 re log Gamma(z))."""
    return math.exp(2.0 * log_gamma(z).real)


def gamma_pair_product(n: int, z, half_shift: bool = False) -> complex:
    """Gamma(n+z) Gamma(n-z), or Gamma(n+1/2+z) Gamma(n+1/2-z) if ``half_shift``.

    Evaluated with the reflection-based product identities

        Gamma(n+z)Gamma(n-z) = -pi / (z sin(pi z)) * prod_{m<n} (m^2 - z^2)
        Gamma(n+1/2+z)Gamma(n+1/2-z) = pi / cos(pi z) * prod_{m<n} ((m+1/2)^2 - z^2)

    The removable point z = 0 of the first identity is handled by its limit.
    """
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    n = int(n)
    z = complex(z)
    if half_shift:
        c = cmath.cos(math.pi * z)
        if z.imag == 0.0 and (z.real - 0.5) == math.floor(z.real - 0.5):
            raise SingularityError("cos(pi z) vanishes at half-odd integers")
        prod = 1.0 + 0j
        for m in range(n):
            prod *= (m + 0.5) ** 2 - z * z
        return math.pi / c * prod
    if z == 0:
        return complex(math.factorial(n - 1) ** 2)
    if z.imag == 0.0 and z.real == math.floor(z.real):
        raise SingularityError("z must not be a nonzero integer")
    prod = 1.0 + 0j
    for m in range(1, n):
        prod *= m * m - z * z
    # the m = 0 factor (-z^2) cancels against z sin(pi z): pi z / sin(pi z)
    pz = math.pi * z
    if abs(pz) < 1e-4:
        ratio = 1.0 + pz * pz / 6.0 + 7.0 * pz ** 4 / 360.0
    else:
        ratio = pz / cmath.sin(pz)
    return ratio * prod


def erf(x: float) -> float:
    """Error function (libm implementation)."""
    return math.erf(x)


def bessel_k_imag_grid(tau, x: float, abs_tol: float = 1e-12, rel_tol: float = 1e-10,
                       max_levels: int = 10):
    """K_{i tau}(x) for an array of orders ``tau`` at fixed ``x > 0``.

    Integrates exp(-x cosh u) cos(tau u) over [0, U] where the tail factor
    exp(-x cosh U) falls below ``abs_tol``.  Returns ``(values, errors)``.
    """
    if not x > 0:
        raise ValueError("bessel_k_imag requires x > 0")
    tau = np.abs(np.atleast_1d(np.asarray(tau, dtype=float)))
    level = math.log(1.0 / abs_tol)
    upper = math.acosh(max(level / x, 1.0)) + 0.5
    # the truncated tail is below exp(-x cosh U) / (x sinh U)
    tail = math.exp(-x * math.cosh(upper)) / (x * math.sinh(upper))
    n_panels = max(4, int(math.ceil(upper * max(1.0, tau.max()) / 3.0)))

    def integrand(u):
        return np.exp(-x * np.cosh(u))[None, :] * np.cos(np.outer(tau, u))

    try:
        value, err = panel_quad(integrand, 0.0, upper, abs_tol, rel_tol, n_panels,
                                max_levels=max_levels)
    except ConvergenceError as exc:
        raise ConvergenceError(f"K_(i tau)({x}) did not converge", exc.value, exc.abs_err)
    return value, err + tail


def bessel_k_imag(tau: float, x: float, abs_tol: float = 1e-12,
                  rel_tol: float = 1e-10) -> EvalResult:
    """Modified Bessel function of the second kind of imaginary order, K_{i tau}(x)."""
    value, err = bessel_k_imag_grid([tau], x, abs_tol, rel_tol)
    return EvalResult(float(value[0]), float(err[0]))


_TINY = np.finfo(float).tiny


def conical_p_grid(t, r: float, abs_tol: float = 1e-12, rel_tol: float = 1e-10):
    """P_{-1/2+it}(cosh r) for an array of ``t`` at fixed ``r >= 0``.

    Mehler-Dirichlet representation

        P_{-1/2+it}(cosh r) = (sqrt 2 / pi) int_0^r cos(t u) / sqrt(cosh r - cosh u) du.

    The last unit of the interval, where the inverse square root sits, is
    handled by tanh-sinh quadrature with exact endpoint distances; the rest
    by Gauss-Legendre panels.  Returns ``(values, errors)``.
    """
    t = np.abs(np.atleast_1d(np.asarray(t, dtype=float)))
    if r < 0:
        raise ValueError("conical_p requires r >= 0")
    if r == 0.0:
        return np.ones_like(t), np.zeros_like(t)
    x = math.sinh(0.5 * r) ** 2
    near = (x <= 0.1) & (t * t * x <= 0.1)
    if np.any(near):
        values = np.empty_like(t)
        errors = np.empty_like(t)
        values[near], errors[near] = _conical_series(t[near], x)
        if np.any(~near):
            values[~near], errors[~near] = _conical_quad(t[~near], r, abs_tol, rel_tol)
        return values, errors
    return _conical_quad(t, r, abs_tol, rel_tol)


def _conical_series(t, x):
    # P_{-1/2+it}(cosh r) = 2F1(1/2-it, 1/2+it; 1; -x), x = sinh^2(r/2); the
    # caller guarantees x <= 0.1 and t^2 x <= 0.1, so the term ratio
    # ((k - 1/2)^2 + t^2) x / k^2 stays below 0.2
    total = np.ones_like(t)
    term = np.ones_like(t)
    for k in range(1, 40):
        term = term * -((k - 0.5) ** 2 + t * t) * x / (k * k)
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total, np.abs(term) + 1e-16 * np.abs(total)


def _conical_quad(t, r, abs_tol, rel_tol):
    pref = math.sqrt(2.0) / math.pi
    # keep the tanh-sinh piece short when cos(tu) oscillates quickly
    delta = min(r, 1.0, 4.0 / max(1.0, float(t.max())))
    split = r - delta
    # inside the integrals everything is scaled by e^{r/2} to keep O(1) magnitudes
    scale = math.exp(-0.5 * r)

    def inv_sqrt_gap(d):
        # e^{-r} (cosh r - cosh u) with d = r - u, free of overflow and cancellation
        gap = np.exp(-0.5 * d) * -np.expm1(d - 2.0 * r) * np.sinh(0.5 * d)
        # for tiny r the outermost nodes underflow to d = 0; their weight is negligible
        return 1.0 / np.sqrt(np.maximum(gap, _TINY))

    def singular_part(u, du, d):
        return np.cos(np.outer(t, u)) * inv_sqrt_gap(d)[None, :]

    # the tolerances apply to P itself, so divide out the scale factor
    tol_a = abs_tol / scale / 4.0
    val_s, err_s = tanh_sinh(singular_part, split, r, tol_a, rel_tol, max_level=10,
                             endpoint_distances=True)
    val = val_s
    err = err_s
    if split > 0:
        def smooth_part(u):
            return np.cos(np.outer(t, u)) * inv_sqrt_gap(r - u)[None, :]

        n_panels = max(2, int(math.ceil(split * max(1.0, t.max()) / 2.0)))
        val_r, err_r = panel_quad(smooth_part, 0.0, split, tol_a, rel_tol, n_panels)
        val = val + val_r
        err = err + err_r
    return pref * scale * val, pref * scale * err


def conical_p(t: float, r: float, abs_tol: float = 1e-12,
              rel_tol: float = 1e-10) -> EvalResult:
    """Conical function P_{-1/2+it}(cosh r); even in ``t``, equal to 1 at r = 0."""
    value, err = conical_p_grid([t], r, abs_tol, rel_tol)
    return EvalResult(float(value[0]), float(err[0]))
