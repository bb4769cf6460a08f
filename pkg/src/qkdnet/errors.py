"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific class that applies.
"""


class QkdNetError(Exception):
    """Base class for all package errors."""


class ValidationError(QkdNetError, ValueError):
    """A parameter violated its documented bound."""


class CapExceededError(QkdNetError, RuntimeError):
    """A computation would exceed a configured resource cap."""


class InconsistencyError(QkdNetError, RuntimeError):
    """Two internal computations of the same quantity disagreed."""
