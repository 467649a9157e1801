"""
Errors raised by the numerical modules.
"""


class MehlerTracesError(Exception):
    """Base class for all library errors."""


class DomainError(MehlerTracesError, ValueError):
    """Arguments outside the domain of an operation."""


class ConvergenceError(MehlerTracesError):
    """Requested accuracy cannot be reached with the given resources."""


class BelowNoiseFloorError(MehlerTracesError):
    """Data indistinguishable from numerical noise."""


class CheckFailedError(MehlerTracesError):
    """An inequality, identity or rate check did not hold."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point
