"""Exception types shared across the package.

Failure classes map onto the CLI exit codes: usage problems (bad arguments,
unsupported weights), numeric problems (non-convergence, precision loss),
and check failures (an asserted inequality or consistency test not met).
"""


class CuspZerosError(Exception):
    """Base class for all package errors."""


class UsageError(CuspZerosError, ValueError):
    """Invalid argument or configuration value."""


class UnsupportedWeightError(UsageError):
    """Weight k does not select a one-dimensional eigenform space."""


class TableTooSmallError(UsageError):
    """Coefficient table does not cover the requested index range."""


class DomainError(CuspZerosError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PhaseStepError(DomainError):
    """Step between successive phase evaluations too large to track the branch."""


class NumericError(CuspZerosError, RuntimeError):
    """Numeric failure: non-convergence or unattainable tolerance."""

    def __init__(self, message, value=None, est_error=None):
        super().__init__(message)
        self.value = value
        self.est_error = est_error


class ContourError(NumericError):
    """Winding-number computation could not be resolved to an integer."""


class CheckFailureError(CuspZerosError, RuntimeError):
    """An asserted consistency check failed (honest failure, no repair)."""


class ZeroDiscrepancyError(CheckFailureError):
    """Sign-change zero inventory disagrees with the contour count."""
