"""Workbench exceptions."""

from typing import Any


class InnoviterbiError(Exception):
    """Base exception for workbench errors."""

    exit_code = 1

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.details = details or {}


class ValidationError(InnoviterbiError):
    """Input outside the domain of an operation."""

    pass


class ShapeError(ValidationError):
    """Matrix or frame dimensions do not match."""

    pass


class FrameError(ValidationError):
    """Frame cannot be used as requested (unterminated, too short, index out of range)."""

    pass


class NoPolynomialInverseError(ValidationError):
    """Matrix has a non-unit invariant factor or is rank deficient."""

    pass


class UnsupportedCodeError(ValidationError):
    """Operation is not defined for this code."""

    pass


class ConsistencyError(InnoviterbiError):
    """Two independent computations of the same quantity disagree."""

    pass


class ConfigurationError(InnoviterbiError):
    """Configuration error."""

    exit_code = 2


class NumericGuardError(InnoviterbiError):
    """A resource guard tripped."""

    exit_code = 3


class DegreeOverflowError(NumericGuardError):
    """Polynomial degree above the supported cap."""

    pass


class StateBudgetError(NumericGuardError):
    """Trellis would have too many states."""

    pass


class SupportTooLargeError(NumericGuardError):
    """Too many distinct error bits to enumerate."""

    pass


class OracleSizeError(NumericGuardError):
    """Block code too large for exhaustive decoding."""

    pass
