"""Radial kernel profiles g(r), their closed-form spherical transforms,
moment generating functions and Herschel-Maxwell type densities.

Profiles are small immutable objects.  Besides ``g`` itself each one
knows a logarithmic majorant of ``|g|`` (used to pick truncation radii) and,
when it has one, its analytic continuation to a horizontal strip (used by the
contour-shifted H3 quadrature).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, ClassVar, Optional

import numpy as np

from . import specfun
from .errors import DimensionMismatch, DomainError, ParameterError
from .geometry import HPoint, Space, distance

__all__ = [
    "RadialProfile", "Gaussian", "Wishart", "Sech", "Custom", "parse_profile",
    "format_number", "profile_eval", "kernel_eval", "closed_form", "gaussian_mgf",
    "sech_mgf", "gaussian_asymptotic_h2", "z_lambda", "HMDistribution",
    "hm_density", "gauss_density_h2", "spherical_hm",
]


def format_number(x: float) -> str:
    """Shortest round-tripping decimal form; integral values lose the '.0'."""
    text = repr(float(x))
    return text[:-2] if text.endswith(".0") else text


class RadialProfile:
    """Base class for g(r) in a distance kernel k(x, y) = g(d(x, y))."""

    kind: ClassVar[str] = "abstract"
    #: half-width of the strip |Im z| < strip where ``log_complex`` is valid
    strip: ClassVar[float] = 0.0

    def __call__(self, r):
        raise NotImplementedError

    def log_bound(self, r):
        """log of a majorant m(r) >= sup_{s >= r} |g(s)|, or ``None`` if unknown."""
        return None

    def log_complex(self, z):
        """Analytic continuation of log g to the strip; NotImplementedError if none."""
        raise NotImplementedError(f"{self.kind} profile has no analytic continuation")

    def descriptor(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.descriptor()


@dataclass(frozen=True)
class Gaussian(RadialProfile):
    lam: float
    kind: ClassVar[str] = "gaussian"
    strip: ClassVar[float] = math.inf

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise ParameterError("Gaussian kernel needs lambda > 0")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.exp(-self.lam * r * r)

    def log_bound(self, r):
        r = np.asarray(r, dtype=float)
        return -self.lam * r * r

    def log_complex(self, z):
        return -self.lam * z * z

    def descriptor(self):
        return f"gaussian:lambda={format_number(self.lam)}"


@dataclass(frozen=True)
class Wishart(RadialProfile):
    a: float
    kind: ClassVar[str] = "wishart"
    # exp(-2a cosh z) is entire, but decays along r + iy only while cos y > 0
    strip: ClassVar[float] = 0.5 * math.pi

    def __post_init__(self):
        if not (self.a > 0 and math.isfinite(self.a)):
            raise ParameterError("Wishart kernel needs a > 0")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.exp(-2.0 * self.a * np.cosh(r))

    def log_bound(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(over="ignore"):
            return -2.0 * self.a * np.cosh(r)

    def log_complex(self, z):
        return -2.0 * self.a * np.cosh(z)

    def descriptor(self):
        return f"wishart:a={format_number(self.a)}"


@dataclass(frozen=True)
class Sech(RadialProfile):
    a: float
    kind: ClassVar[str] = "sech"
    strip: ClassVar[float] = 0.5 * math.pi  # cosh vanishes at i pi/2

    def __post_init__(self):
        if not (self.a > 0 and math.isfinite(self.a)):
            raise ParameterError("sech kernel needs a > 0")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.exp(-self.a * _log_cosh(r))

    def log_bound(self, r):
        return -self.a * _log_cosh(np.asarray(r, dtype=float))

    def log_complex(self, z):
        z = np.asarray(z, dtype=complex)
        # log cosh z = |Re z| + log((1 + e^{-2z})/2), safe for large Re z
        zz = np.where(z.real < 0, -z, z)
        return -self.a * (zz + np.log1p(np.exp(-2.0 * zz)) - math.log(2.0))

    @property
    def is_integer(self) -> bool:
        return float(self.a).is_integer()

    def descriptor(self):
        return f"sech:a={format_number(self.a)}"


def _log_cosh(r):
    r = np.abs(r)
    return r + np.log1p(np.exp(-2.0 * r)) - math.log(2.0)


@dataclass(frozen=True)
class Custom(RadialProfile):
    """User supplied g.

    ``log_bound`` plays the role of the tail-bound descriptor: a callable
    returning log sup_{s>=r}|g(s)|.  Without it, transforms need an explicit
    ``r_max``.
    """

    evaluator: Callable
    log_bound_fn: Optional[Callable] = None
    name: str = "custom"
    kind: ClassVar[str] = "custom"

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.asarray(self.evaluator(r), dtype=float) * np.ones_like(r)

    def log_bound(self, r):
        if self.log_bound_fn is None:
            return None
        return np.asarray(self.log_bound_fn(np.asarray(r, dtype=float)), dtype=float)

    def descriptor(self):
        return f"custom:name={self.name}"


_PARAM_NAMES = {"gaussian": ("lambda", Gaussian), "sech": ("a", Sech), "wishart": ("a", Wishart)}
_DESCRIPTOR = re.compile(r"^\s*([a-z]+)\s*(?::\s*([a-z]+)\s*=\s*([^\s]+)\s*)?$")


def parse_profile(text: str) -> RadialProfile:
    """Parse ``kind:param=value`` (``gaussian:lambda=1``, ``sech:a=2``, ``wishart:a=0.5``).

    Grammar: kind is one of gaussian/sech/wishart (case-insensitive), the
    single parameter is ``lambda`` for gaussian and ``a`` otherwise, the
    value is any Python float literal.  :meth:`RadialProfile.descriptor`
    prints the same grammar with the shortest round-tripping float.
    """
    m = _DESCRIPTOR.match(text.lower())
    if not m or m.group(1) not in _PARAM_NAMES:
        raise ValueError(f"cannot parse kernel descriptor {text!r}")
    kind, key, value = m.groups()
    expected, cls = _PARAM_NAMES[kind]
    if key is None:
        raise ValueError(f"{kind} descriptor needs {expected}=<value>")
    if key != expected:
        raise ValueError(f"{kind} takes parameter {expected!r}, got {key!r}")
    try:
        number = float(value)
    except ValueError:
        raise ValueError(f"bad number {value!r} in kernel descriptor") from None
    return cls(number)


def profile_eval(profile: RadialProfile, r: float) -> float:
    if r < 0:
        raise ValueError("profile_eval needs r >= 0")
    return float(profile(np.array([r]))[0])


def kernel_eval(space: Space, profile: RadialProfile, p: HPoint, q: HPoint) -> float:
    """k(p, q) = g(d(p, q)) for points of ``space``."""
    if p.dim != space.dim or q.dim != space.dim:
        raise DimensionMismatch(f"points are not in {space.name}")
    return profile_eval(profile, distance(p, q))


# ---------------------------------------------------------------- closed forms

def _exp(x: float) -> float:
    # values past the float range come from genuine poles approached closely
    return math.exp(x) if x < 709.0 else math.inf


def _sech_h2(a: float, t: float) -> float:
    log_pref = (a - 1.0) * math.log(2.0) + 0.5 * math.log(math.pi) - specfun.log_gamma(a).real
    return _exp(log_pref + 2.0 * specfun.log_gamma(complex(0.5 * a - 0.25, 0.5 * t)).real)


def _sech_h3(a: int, t: float) -> float:
    if a % 2:
        n = (a - 1) // 2
        log_pref = n * math.log(4.0) + math.log(math.pi) - math.lgamma(2 * n + 1)
        if n == 0 and t > 0.0 and 0.5 * t == 0.0:
            # |Gamma(it/2)|^2 ~ 4/t^2 overflowed long before t/2 underflows
            return math.inf
        z = complex(n, 0.5 * t)
    else:
        n = a // 2
        log_pref = n * math.log(4.0) + math.log(n * math.pi) - math.lgamma(2 * n + 1)
        z = complex(n - 0.5, 0.5 * t)
    return _exp(log_pref + 2.0 * specfun.log_gamma(z).real)


def _gaussian_h3(lam: float, t: float) -> float:
    root = math.sqrt(math.pi / lam)
    if t == 0.0:
        return math.pi / lam * root * math.exp(0.25 / lam)
    return 2.0 * math.pi / t * root * math.exp((1.0 - t * t) / (4.0 * lam)) * math.sin(t / (2.0 * lam))


def closed_form(space: Space, profile: RadialProfile, t: float) -> Optional[float]:
    """Exact spherical transform where one is known, else ``None``.

    Known pairs: Sech and Wishart on H2, Gaussian on H3 and Sech with
    integer exponent on H3.  Gaussian on H2 has no closed form (see
    :func:`gaussian_asymptotic_h2` for its large-lambda expansion).
    The value is even in ``t``; ``t = 0`` is returned as the limit where
    it exists and raises :class:`~hyperpd.errors.PoleError` where it does not.
    """
    t = abs(float(t))
    if space is Space.H2:
        if isinstance(profile, Sech):
            return _sech_h2(profile.a, t)
        if isinstance(profile, Wishart):
            k = specfun.bessel_k_imag(t, 2.0 * profile.a, abs_tol=1e-15, rel_tol=1e-13)
            return math.sqrt(4.0 * math.pi / profile.a) * k.value
        return None
    if isinstance(profile, Gaussian):
        return _gaussian_h3(profile.lam, t)
    if isinstance(profile, Sech) and profile.is_integer:
        return _sech_h3(int(profile.a), t)
    return None


def gaussian_mgf(lam: float, s) -> complex:
    """G(s) = int_R e^{-lam r^2} e^{s r} dr = sqrt(pi/lam) exp(s^2 / 4 lam)."""
    if not lam > 0:
        raise ParameterError("lambda must be positive")
    s = complex(s)
    return math.sqrt(math.pi / lam) * np.exp(s * s / (4.0 * lam))


def sech_mgf(a: int, sigma) -> complex:
    """G(i sigma) for g(r) = cosh(r)^{-a} with positive integer ``a``.

    Odd a = 2n+1:  pi sech(pi sigma/2) / (2n)! * prod_{m<n} (sigma^2 + (2m+1)^2)
    Even a = 2n:   pi sigma csch(pi sigma/2) / (2n-1)! * prod_{1<=m<n} (sigma^2 + (2m)^2)

    Valid for Im sigma >= -1 (the formulas extend further but the defining
    integral is only needed there).
    """
    if int(a) != a or a < 1:
        raise ParameterError("sech_mgf needs a positive integer a")
    a = int(a)
    sigma = complex(sigma)
    if sigma.imag < -1.0:
        raise DomainError("sech_mgf needs Im(sigma) >= -1")
    x = 0.5 * math.pi * sigma
    s2 = sigma * sigma
    if a % 2:
        n = (a - 1) // 2
        prod = 1.0 + 0j
        for m in range(n):
            prod *= s2 + (2 * m + 1) ** 2
        c = np.cosh(x)
        if c == 0:
            raise DomainError("sech_mgf evaluated at a pole")
        return complex(math.pi / c * prod / math.factorial(2 * n))
    n = a // 2
    prod = 1.0 + 0j
    for m in range(1, n):
        prod *= s2 + (2 * m) ** 2
    # pi sigma / sinh(pi sigma / 2) -> 2 at sigma = 0
    if abs(x) < 1e-4:
        ratio = 2.0 * (1.0 - x * x / 6.0 + 7.0 * x ** 4 / 360.0)
    else:
        sh = np.sinh(x)
        if sh == 0:
            raise DomainError("sech_mgf evaluated at a pole")
        ratio = math.pi * sigma / sh
    return complex(ratio * prod / math.factorial(2 * n - 1))


#: the lambda^-2 shift obtained from Z(lam) = 1/(2 lam) + 1/(12 lam^2) + ...
EXACT_SHIFT = 5.0 / 12.0


def gaussian_asymptotic_h2(lam: float, t: float, shift: float = 13.0 / 12.0) -> float:
    """Two-term large-lambda expansion lam^-1/2 - (t^2 - shift) lam^-2/8.

    This approximates the H2 transform divided by 2 pi, i.e.
    int_0^inf e^{-lam r^2} P_{-1/2+it}(cosh r) sinh r dr.  The default
    ``shift = 13/12`` is the published constant; Taylor-expanding Z(lam)
    gives :data:`EXACT_SHIFT` = 5/12 instead, which makes the remainder
    O(lam^-3) rather than O(lam^-2).  Both agree to leading order.
    """
    if not lam > 0:
        raise ParameterError("lambda must be positive")
    return 0.5 / lam - (t * t - shift) / (8.0 * lam * lam)


def z_lambda(lam: float) -> float:
    """Z(lam) = int_0^inf e^{-lam r^2} sinh r dr = (1/2) sqrt(pi/lam) e^{1/(4lam)} erf(1/(2 sqrt(lam))).

    For large lam, Z = lam^-1/2 + lam^-2/12 + O(lam^-3).
    """
    if not lam > 0:
        raise ParameterError("lambda must be positive")
    return 0.5 * math.sqrt(math.pi / lam) * math.exp(0.25 / lam) * specfun.erf(0.5 / math.sqrt(lam))


# ---------------------------------------------------------------- densities

def _sphere_area(k: int) -> float:
    """Surface area of the unit k-sphere in R^{k+1}."""
    return 2.0 * math.pi ** (0.5 * (k + 1)) / math.gamma(0.5 * (k + 1))


@dataclass(frozen=True)
class HMDistribution:
    """Density proportional to cosh(r)^{-a} on n-dimensional hyperbolic space.

    The normalizer makes the density integrate to one against the volume
    element omega_{n-1} sinh^{n-1}(r) dr:

        C = 2 Gamma((a+1)/2) / (omega_{n-1} Gamma((a+1-n)/2) Gamma(n/2)).
    """

    n: int
    a: float
    normalizer: float = field(init=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ParameterError("dimension n must be an integer >= 2")
        if not self.a > self.n - 1:
            raise ParameterError(f"need a > n - 1 = {self.n - 1}")
        log_c = (math.log(2.0) + math.lgamma(0.5 * (self.a + 1))
                 - math.log(_sphere_area(self.n - 1))
                 - math.lgamma(0.5 * (self.a + 1 - self.n)) - math.lgamma(0.5 * self.n))
        object.__setattr__(self, "normalizer", math.exp(log_c))


def hm_density(dist: HMDistribution, r):
    r = np.asarray(r, dtype=float)
    return dist.normalizer * np.exp(-dist.a * _log_cosh(r))


def gauss_density_h2(lam: float, r):
    """e^{-lam r^2} / (2 pi Z(lam)), a probability density on H2."""
    r = np.asarray(r, dtype=float)
    return np.exp(-lam * r * r) / (2.0 * math.pi * z_lambda(lam))


def spherical_hm(a: float, c):
    """|c|^a with c = cos d(x, y) on the sphere."""
    if a < 0:
        raise ParameterError("spherical HM kernel needs a >= 0")
    c = np.asarray(c, dtype=float)
    if np.any(np.abs(c) > 1.0 + 1e-12):
        raise DomainError("c must lie in [-1, 1]")
    return np.abs(c) ** a
