"""Data model for completely randomized experiments."""
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from utils.errors import DataError, DegenerateArm, NonBinaryTreatment, SizeMismatch


def _frozen(values, ndim: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if ndim == 2 and arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != ndim:
        raise DataError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains missing or non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PotentialOutcomeTable:
    """Full population: treated outcomes a, control outcomes b, covariates z."""
    a: np.ndarray
    b: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        a = _frozen(self.a, 1, "a")
        b = _frozen(self.b, 1, "b")
        z = _frozen(self.z, 2, "z")
        n = a.shape[0]
        if b.shape[0] != n or z.shape[0] != n:
            raise SizeMismatch(f"a, b and z disagree on n: {a.shape[0]}, {b.shape[0]}, {z.shape[0]}")
        k = z.shape[1]
        if n < 4 or k < 1 or n <= k + 2:
            raise DataError(f"need n >= 4, K >= 1 and n > K + 2; got n={n}, K={k}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "z", z)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def k(self) -> int:
        return self.z.shape[1]

    @property
    def true_ate(self) -> float:
        return float(np.mean(self.a) - np.mean(self.b))

    @property
    def a_star(self) -> np.ndarray:
        return self.a - np.mean(self.a)

    @property
    def b_star(self) -> np.ndarray:
        return self.b - np.mean(self.b)


@dataclass(frozen=True)
class Assignment:
    """Treated set of a complete randomization of n units."""
    n: int
    treated: Tuple[int, ...]

    def __post_init__(self):
        treated = tuple(sorted(int(i) for i in self.treated))
        if len(set(treated)) != len(treated):
            raise DataError("treated indices must be distinct")
        if treated and (treated[0] < 0 or treated[-1] >= self.n):
            raise DataError(f"treated indices must lie in [0, {self.n})")
        n_a = len(treated)
        if n_a < 2 or self.n - n_a < 2:
            raise DegenerateArm(f"both arms need at least 2 units; got n_A={n_a}, n_B={self.n - n_a}")
        object.__setattr__(self, "treated", treated)

    @property
    def n_a(self) -> int:
        return len(self.treated)

    @property
    def n_b(self) -> int:
        return self.n - self.n_a

    @property
    def p_a(self) -> float:
        return self.n_a / self.n

    def indicator(self) -> np.ndarray:
        """Treatment dummy T_i as a 0/1 float array."""
        t = np.zeros(self.n)
        t[list(self.treated)] = 1.0
        return t


@dataclass(frozen=True, eq=False)
class ExperimentData:
    """One realized dataset (y, t, centered z) as seen by the analyst."""
    y: np.ndarray
    t: np.ndarray
    z: np.ndarray
    centering_shift: np.ndarray = field(default=None)

    def __post_init__(self):
        y = _frozen(self.y, 1, "y")
        t = _frozen(self.t, 1, "t")
        z = _frozen(self.z, 2, "z")
        n = y.shape[0]
        if t.shape[0] != n or z.shape[0] != n:
            raise SizeMismatch(f"y, t and z disagree on n: {y.shape[0]}, {t.shape[0]}, {z.shape[0]}")
        if not np.all((t == 0.0) | (t == 1.0)):
            bad = sorted(set(np.unique(t)) - {0.0, 1.0})
            raise NonBinaryTreatment(f"treatment must be 0/1, found {bad[:5]}")
        n_a = int(t.sum())
        if n_a < 2 or n - n_a < 2:
            raise DegenerateArm(f"both arms need at least 2 units; got n_A={n_a}, n_B={n - n_a}")

        scale = max(float(np.max(np.abs(z))), 1.0)
        if np.any(np.abs(z.sum(axis=0)) > 1e-10 * n * scale):
            raise DataError("covariates must be centered; use ExperimentData.from_raw")

        shift = np.zeros(z.shape[1]) if self.centering_shift is None else self.centering_shift
        shift = _frozen(shift, 1, "centering_shift")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "centering_shift", shift)

    @classmethod
    def from_raw(cls, y: Sequence[float], t: Sequence[float], z_raw) -> "ExperimentData":
        """Build a dataset, demeaning every covariate column."""
        from design.experiment import center_columns
        z, shift = center_columns(z_raw)
        return cls(y=y, t=t, z=z, centering_shift=shift)

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def k(self) -> int:
        return self.z.shape[1]

    @property
    def treated(self) -> np.ndarray:
        return self.t == 1.0

    @property
    def n_a(self) -> int:
        return int(self.t.sum())

    @property
    def n_b(self) -> int:
        return self.n - self.n_a

    @property
    def p_a(self) -> float:
        return self.n_a / self.n

    @property
    def p_b(self) -> float:
        return self.n_b / self.n


@dataclass(frozen=True, eq=False)
class GroupStats:
    """Arm-wise means and cross moments of a realized dataset."""
    p_a: float
    p_b: float
    mean_y_a: float
    mean_y_b: float
    mean_z_a: np.ndarray
    mean_z_b: np.ndarray
    mean_yz_a: np.ndarray
    mean_yz_b: np.ndarray
    mean_zz_a: np.ndarray
    mean_zz_b: np.ndarray
    mean_zz: np.ndarray
