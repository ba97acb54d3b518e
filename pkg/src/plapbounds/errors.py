"""Shared exception types."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed to converge within its budget."""


class BracketError(ConvergenceError):
    """The eigenvalue sweep exhausted its range without bracketing a root."""


class ResolutionError(ValueError):
    """A grid is too coarse to resolve the domain."""
