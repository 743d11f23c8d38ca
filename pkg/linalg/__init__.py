"""Linear algebra package for debias-ate."""
from linalg.symmetric import SymMatrix, Vec, invert_spd, quadratic_form, quadratic_forms

__all__ = ["SymMatrix", "Vec", "invert_spd", "quadratic_form", "quadratic_forms"]
