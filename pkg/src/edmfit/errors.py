"""Exception types shared across the package."""


class EdmError(Exception):
    """Base class for all package-specific errors."""


class DomainError(EdmError, ValueError):
    """A parameter or argument violates its documented domain."""


class SingularParametersError(DomainError):
    """LMS dispersion parameters are on or too close to the p == b singularity."""


class PrecisionError(EdmError, ArithmeticError):
    """Floating-point precision was exhausted while computing a kernel or pmf.

    ``n`` names the first kernel index at which the failure was detected,
    when known.
    """

    def __init__(self, message: str, n: int | None = None):
        super().__init__(message)
        self.n = n


class OracleCapError(EdmError, ValueError):
    """Partition-sum kernel evaluation requested beyond its cost cap."""


class TailCapError(EdmError, RuntimeError):
    """A pmf table hit its term cap before accumulating the target mass.

    ``accumulated`` holds the probability mass reached at the cap.
    """

    def __init__(self, message: str, accumulated: float | None = None):
        super().__init__(message)
        self.accumulated = accumulated


class NonConvergenceError(EdmError, RuntimeError):
    """No optimizer start converged; ``incumbent`` carries the best fit found."""

    def __init__(self, message: str, incumbent=None):
        super().__init__(message)
        self.incumbent = incumbent


class InsufficientCellsError(EdmError, ValueError):
    """Too few cells remain after pooling for a valid chi-square test."""


class DatasetFormatError(EdmError, ValueError):
    """A dataset file or literal could not be parsed; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
