"""
Exception hierarchy for bisqueeze.

Validation problems (bad input, bad configuration, non-physical states) and
numerical failures (eigen-solver trouble, Fock truncation) are kept apart so
the CLI can map them onto distinct exit codes.
"""

from typing import Optional


class BisqueezeError(Exception):
    """Base class for all errors raised by the package."""

    exit_code = 1


class ValidationError(BisqueezeError):
    """Input does not satisfy an operation's preconditions."""

    exit_code = 2


class DimensionError(ValidationError):
    """Mode counts or matrix shapes do not match."""


class InvalidModeError(ValidationError):
    """Empty, duplicated or out-of-range mode selection."""


class InvalidParameterError(ValidationError):
    """A scalar parameter lies outside its domain."""


class NonPhysicalStateError(ValidationError):
    """Covariance matrix violates sigma + i*Omega >= 0."""

    def __init__(self, message: str, min_eigenvalue: Optional[float] = None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class ConfigError(ValidationError):
    """Configuration file or command-line flag could not be validated."""

    def __init__(
        self,
        message: str,
        field: Optional[str] = None,
        line: Optional[int] = None,
    ):
        location = []
        if field:
            location.append(f"field '{field}'")
        if line is not None:
            location.append(f"line {line}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.field = field
        self.line = line


class NumericalError(BisqueezeError):
    """A numerical routine failed or produced an inconsistent result."""

    exit_code = 3


class EigenvalueError(NumericalError):
    """Eigen-solver failure or unpaired symplectic spectrum."""


class TruncationError(NumericalError):
    """Fock-space cutoff too small for the requested squeezing."""
