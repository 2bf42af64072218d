"""Exception types raised by the numerical routines."""


class HyperPDError(Exception):
    """Base class for all errors raised by :mod:`hyperpd`."""


class PoleError(HyperPDError, ValueError):
    """Gamma function evaluated at a nonpositive integer."""


class SingularityError(HyperPDError, ValueError):
    """A product identity was evaluated at one of its excluded points."""


class DomainError(HyperPDError, ValueError):
    """An argument lies outside the domain where a formula is valid."""


class ParameterError(HyperPDError, ValueError):
    """A distribution or kernel parameter is out of range."""


class DimensionMismatch(HyperPDError, ValueError):
    pass


class SymmetryError(HyperPDError, ValueError):
    pass


class ConvergenceError(HyperPDError, ArithmeticError):
    """Requested tolerance was not met at the maximum refinement level."""

    def __init__(self, message, value=None, abs_err=None):
        super().__init__(message)
        self.value = value
        self.abs_err = abs_err


class TailError(HyperPDError, ArithmeticError):
    """An automatic truncation radius could not bound the integrand tail."""


class SpectralTailError(HyperPDError, ArithmeticError):
    """Spectral samples do not decay enough for the inversion integral."""
