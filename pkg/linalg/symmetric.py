"""Small dense symmetric matrices: inversion and quadratic forms."""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy.linalg import solve_triangular

from config import settings
from utils.errors import DimensionMismatch, SingularMatrix


logger = logging.getLogger(__name__)

Vec = np.ndarray


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Immutable K x K symmetric matrix."""
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim == 0:
            entries = entries.reshape(1, 1)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] < 1:
            raise DimensionMismatch(f"expected a square matrix, got shape {entries.shape}")
        # Store the exactly symmetric part
        entries = (entries + entries.T) / 2.0
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "SymMatrix":
        return cls(np.eye(dim))

    def __matmul__(self, other):
        return self.entries @ _as_array(other)


MatrixLike = Union[SymMatrix, np.ndarray]


def _as_array(m) -> np.ndarray:
    return m.entries if isinstance(m, SymMatrix) else np.asarray(m, dtype=float)


def _pivoted_ldl(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Diagonal-pivoted LDL' factorization: A[perm][:, perm] = L diag(d) L'."""
    a = np.array(a, dtype=float, copy=True)
    k = a.shape[0]
    perm = np.arange(k)
    lower = np.eye(k)
    pivots = np.zeros(k)

    for j in range(k):
        # Largest remaining diagonal entry of the Schur complement
        p = j + int(np.argmax(np.abs(np.diag(a)[j:])))
        if p != j:
            a[[j, p], :] = a[[p, j], :]
            a[:, [j, p]] = a[:, [p, j]]
            lower[[j, p], :j] = lower[[p, j], :j]
            perm[[j, p]] = perm[[p, j]]

        d = a[j, j]
        pivots[j] = d
        if d == 0.0:
            break
        col = a[j + 1:, j] / d
        lower[j + 1:, j] = col
        a[j + 1:, j + 1:] -= np.outer(col, a[j, j + 1:])

    return lower, pivots, perm


def _spectral_pseudo_inverse(a: np.ndarray, rel_tol: float, name: Optional[str]) -> np.ndarray:
    """Generalized inverse with eigenvalues below rel_tol * max dropped."""
    eigvals, eigvecs = np.linalg.eigh(a)
    top = np.max(np.abs(eigvals))
    if top == 0.0:
        raise SingularMatrix("matrix is identically zero", matrix=name)
    keep = np.abs(eigvals) >= rel_tol * top
    dropped = int(np.sum(~keep))
    if dropped:
        logger.warning(f"Pseudo-inverse of {name or 'matrix'} dropped {dropped} eigenvalue(s)")
    inv_vals = np.zeros_like(eigvals)
    inv_vals[keep] = 1.0 / eigvals[keep]
    return (eigvecs * inv_vals) @ eigvecs.T


def invert_spd(m: MatrixLike, rel_tol: float = None, pseudo: bool = None,
               name: Optional[str] = None) -> SymMatrix:
    """Invert a symmetric positive definite matrix via pivoted LDL'.

    Raises SingularMatrix when the smallest pivot magnitude falls below
    rel_tol times the largest. With pseudo=True a spectral-cutoff
    generalized inverse is returned instead.
    """
    rel_tol = settings.REL_TOL if rel_tol is None else rel_tol
    pseudo = settings.PSEUDO_INVERSE if pseudo is None else pseudo
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")

    a = SymMatrix(_as_array(m)).entries
    if not np.all(np.isfinite(a)):
        raise SingularMatrix("matrix has non-finite entries", matrix=name)

    if pseudo:
        return SymMatrix(_spectral_pseudo_inverse(a, rel_tol, name))

    lower, pivots, perm = _pivoted_ldl(a)
    largest = np.max(np.abs(pivots))
    smallest = np.min(np.abs(pivots))
    if largest == 0.0 or smallest < rel_tol * largest:
        raise SingularMatrix(
            f"smallest pivot {smallest:.3e} below {rel_tol:.1e} x largest pivot {largest:.3e}",
            matrix=name,
        )
    if np.any(pivots < 0):
        raise SingularMatrix("matrix is not positive definite", matrix=name)

    k = a.shape[0]
    lower_inv = solve_triangular(lower, np.eye(k), lower=True, unit_diagonal=True)
    permuted_inv = (lower_inv.T / pivots) @ lower_inv
    inverse = np.empty_like(permuted_inv)
    inverse[np.ix_(perm, perm)] = permuted_inv
    return SymMatrix(inverse)


def quadratic_form(v: Vec, m_inv: MatrixLike) -> float:
    """Return v' M v."""
    v = np.asarray(v, dtype=float)
    mat = _as_array(m_inv)
    if v.ndim != 1 or mat.shape != (v.shape[0], v.shape[0]):
        raise DimensionMismatch(f"vector of length {v.shape} against matrix {mat.shape}")
    return float(v @ mat @ v)


def quadratic_forms(rows: np.ndarray, m_inv: MatrixLike) -> np.ndarray:
    """Row-wise quadratic forms r_i' M r_i for an (n, K) array."""
    rows = np.asarray(rows, dtype=float)
    mat = _as_array(m_inv)
    if rows.ndim != 2 or mat.shape != (rows.shape[1], rows.shape[1]):
        raise DimensionMismatch(f"rows of shape {rows.shape} against matrix {mat.shape}")
    return np.einsum("ij,jk,ik->i", rows, mat, rows)
