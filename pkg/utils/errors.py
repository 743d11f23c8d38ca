"""Error types for the debiasing library and CLI."""
from typing import Optional


class DebiasError(Exception):
    """Base class for all library errors."""

    exit_code = 2


# Data errors
class DataError(DebiasError, ValueError):
    """Invalid or inconsistent input data."""


class SizeMismatch(DataError):
    """Two objects disagree on the population size."""


class DimensionMismatch(DataError):
    """Vector and matrix dimensions do not agree."""


class ParseError(DataError):
    """A CSV cell could not be parsed."""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column '{column}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.row = row
        self.column = column


class NonBinaryTreatment(DataError):
    """Treatment column contains values other than 0 and 1."""


class DegenerateArm(DataError):
    """An arm has too few units for the requested statistic."""


class ArmTooSmall(DegenerateArm):
    """An arm has fewer than three units, so bias constants are undefined."""


class DomainError(DataError):
    """Argument outside the domain of a function."""


class IndexOutOfRange(DataError):
    """Rank outside the assignment space."""


# Model errors
class ModelError(DebiasError, ArithmeticError):
    """Numerical failure of a model computation."""


class SingularMatrix(ModelError):
    """Matrix is singular at the configured tolerance."""

    def __init__(self, message: str, matrix: Optional[str] = None):
        if matrix:
            message = f"{matrix}: {message}"
        super().__init__(message)
        self.matrix = matrix


class LeverageOne(ModelError):
    """Some hat value is numerically one (perfect-fit point)."""


class DegenerateSpectrum(ModelError):
    """Satterthwaite spectrum is identically zero."""


class Overflow(ModelError):
    """Assignment space too large for the requested operation."""


class BudgetExceeded(ModelError):
    """Exact enumeration exceeds the configured budget."""


class AssignmentError(ModelError):
    """A model error raised while evaluating one assignment."""

    def __init__(self, rank: Optional[int], cause: Exception):
        where = f"assignment rank {rank}" if rank is not None else "sampled assignment"
        super().__init__(f"{where}: {cause}")
        self.rank = rank
        self.cause = cause

    def __reduce__(self):
        return (self.__class__, (self.rank, self.cause))


class VerificationFailure(DebiasError):
    """An identity check failed."""

    exit_code = 3

    def __init__(self, name: str, residual: float):
        super().__init__(f"{name} failed with residual {residual:.3e}")
        self.name = name
        self.residual = residual

    def __reduce__(self):
        return (self.__class__, (self.name, self.residual))


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the CLI exit code contract."""
    if isinstance(exc, DebiasError):
        return exc.exit_code
    if isinstance(exc, OSError):
        return 1
    return 2
