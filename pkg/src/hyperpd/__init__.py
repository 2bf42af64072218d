"""Spherical transforms and positive-definiteness checks for radial kernels
on the hyperbolic plane and hyperbolic 3-space."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .geometry import HPoint, PointSet, Space, distance, lobachevsky_point, sample_ball
from .kernels import Custom, Gaussian, HMDistribution, Sech, Wishart, closed_form, parse_profile
from .quadrature import DEFAULT_CONFIG, EvalResult, QuadratureConfig
from .transforms import SpectralSamples, forward, forward_grid, inverse, lp_norm
