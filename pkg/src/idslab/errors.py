"""Exception hierarchy for idslab.

Two families matter to callers: configuration problems (CLI exit code 2) and
numerical failures (CLI exit code 1).
"""

from typing import Optional


class IDSLabError(Exception):
    """Base class for all idslab errors."""


class ConfigurationError(IDSLabError):
    """An experiment configuration is malformed or inconsistent."""

    def __init__(self, message: str, field_path: Optional[str] = None):
        self.field_path = field_path
        prefix = f"{field_path}: " if field_path else ""
        super().__init__(f"{prefix}{message}")


class NumericalError(IDSLabError):
    """A numerical stage failed."""


# Group model


class GroupMismatchError(IDSLabError, ValueError):
    """Operands belong to different group families or ranks."""


class CoordinateOverflowError(IDSLabError, ValueError):
    """An element lies outside the fixed-width key encoding."""


class BallRadiusError(IDSLabError, ValueError):
    """Requested ball radius exceeds the configured memoisation bound."""


class InvalidSequenceError(IDSLabError, ValueError):
    """Følner data is empty or not monotone."""


# Random environment


class UnboundedLawError(IDSLabError, ValueError):
    """A coupling law has unbounded support."""


# Spectral


class EigenSolverConvergenceError(NumericalError):
    """Implicit QL did not converge within the iteration cap."""

    def __init__(self, index: int, iterations: int):
        self.index = index
        self.iterations = iterations
        super().__init__(
            f"QL iteration did not converge for eigenvalue {index} after {iterations} sweeps"
        )


class ChebyshevTruncationError(NumericalError):
    """The Chebyshev degree is too small for the requested accuracy."""

    def __init__(self, degree: int, bound: float, tolerance: float):
        self.degree = degree
        self.bound = bound
        self.tolerance = tolerance
        super().__init__(
            f"Chebyshev truncation bound {bound:.3e} at degree {degree} "
            f"exceeds tolerance {tolerance:.3e}"
        )


class DenseDimensionError(NumericalError):
    """A dense solve was requested above the dense storage limit."""

    def __init__(self, dimension: int, limit: int):
        self.dimension = dimension
        self.limit = limit
        super().__init__(f"dimension {dimension} exceeds the dense storage limit {limit}")


class LaplaceIdentityError(NumericalError):
    """Heat trace and Stieltjes integral of the counting function disagree."""


# Pipeline


class ExperimentTooSmallError(NumericalError):
    """Tempered extraction left fewer index sets than the pipeline needs."""


class SolverTaskError(NumericalError):
    """A worker task failed; carries the task coordinates."""

    def __init__(self, n: int, seed: Optional[int], cause: BaseException):
        self.n = n
        self.seed = seed
        self.cause = cause
        super().__init__(f"task (n={n}, seed={seed}) failed: {cause}")
