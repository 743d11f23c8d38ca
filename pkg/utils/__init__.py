"""Utilities package for debias-ate."""
from utils.errors import (
    DebiasError, DataError, ModelError, SizeMismatch, DimensionMismatch, ParseError,
    NonBinaryTreatment, DegenerateArm, ArmTooSmall, DomainError, IndexOutOfRange,
    SingularMatrix, LeverageOne, DegenerateSpectrum, Overflow, BudgetExceeded,
    AssignmentError, VerificationFailure, exit_code_for,
)

__all__ = [
    "DebiasError", "DataError", "ModelError", "SizeMismatch", "DimensionMismatch", "ParseError",
    "NonBinaryTreatment", "DegenerateArm", "ArmTooSmall", "DomainError", "IndexOutOfRange",
    "SingularMatrix", "LeverageOne", "DegenerateSpectrum", "Overflow", "BudgetExceeded",
    "AssignmentError", "VerificationFailure", "exit_code_for",
]
