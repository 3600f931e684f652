"""Exception types shared across the package."""


class SsvepError(Exception):
    """Base class for all package-specific errors."""


class FormatError(SsvepError):
    """File does not look like a portable dataset (bad magic or version)."""


class CorruptionError(SsvepError):
    """File structure is inconsistent with its own header."""


class ValidationError(SsvepError, ValueError):
    """Data violates a type invariant (non-finite samples, bad metadata)."""


class FilterDesignError(SsvepError):
    """A digital filter design produced a pole on or outside the unit circle."""


class NumericalError(SsvepError, ArithmeticError):
    """A numerical routine cannot proceed (e.g. singular covariance)."""
