"""Exceptions raised by the Heinz constants toolkit."""


class HeinzError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(HeinzError):
    """Bad command-line arguments or run configuration."""


class ComputationError(HeinzError):
    """A numerical evaluation could not be completed or certified."""


class NonConvergent(ComputationError):
    """A series failed its decay test within the term budget."""


class InvalidLowerParameter(ComputationError, ValueError):
    """A lower hypergeometric parameter is zero or a negative integer."""


class PointOnBoundary(ComputationError, ValueError):
    """The Poisson kernel was asked for a point with norm >= 1."""


class QuadratureFailure(ComputationError):
    """Adaptive quadrature could not reach the requested tolerance."""


class TooCloseToBoundary(ComputationError, ValueError):
    """Monte Carlo evaluation point lies outside the variance guard."""


class InsufficientSamples(ComputationError, ValueError):
    """Too few Monte Carlo samples were requested."""


class CenterNotZero(ComputationError):
    """The harmonic extension does not vanish at the origin."""


class UnsupportedDimension(ComputationError, ValueError):
    """No closed form is available for this dimension."""
