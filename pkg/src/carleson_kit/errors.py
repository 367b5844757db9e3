"""Shared exception and warning types."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class LinearDependenceError(DomainError):
    """A subspace family is (numerically) linearly dependent."""


class NetValidityError(DomainError):
    """A vector could not be assigned to any net point at the requested mesh."""


class ContourBoundError(RuntimeError):
    """A structural bound of the contour construction failed."""


class ResolutionWarning(UserWarning):
    """A quantity was requested too close to the boundary for the grid in use."""
