"""OLS fits, HC2/HC3 sandwich variances and Satterthwaite degrees of freedom."""
import logging
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from config import settings
from design.models import ExperimentData
from linalg import SymMatrix, invert_spd
from utils.errors import DataError, DegenerateSpectrum, DimensionMismatch, LeverageOne


logger = logging.getLogger(__name__)

LEVERAGE_CEILING = 1.0 - 1e-12


class Flavor(str, Enum):
    """Sandwich variance flavor; BC flavors recompute residuals at the debiased coefficient."""
    HC2 = "hc2"
    HC3 = "hc3"
    BC_HC2 = "bc-hc2"
    BC_HC3 = "bc-hc3"

    @property
    def bias_corrected(self) -> bool:
        return self in (Flavor.BC_HC2, Flavor.BC_HC3)

    @property
    def base(self) -> "Flavor":
        return Flavor.HC3 if self in (Flavor.HC3, Flavor.BC_HC3) else Flavor.HC2


class StudentDf(str, Enum):
    """Degrees of freedom of the Student-t interval."""
    UNITS = "units"  # n - 1
    RESIDUAL = "residual"  # n - rank(X)


class DesignKind(str, Enum):
    UNADJUSTED = "unadjusted"
    NONINTERACTED = "noninteracted"
    INTERACTED = "interacted"


@dataclass(frozen=True, eq=False)
class FitContext:
    """An OLS fit with the pieces the sandwich estimators need."""
    x: np.ndarray
    y: np.ndarray
    beta: np.ndarray
    residuals: np.ndarray
    hat: np.ndarray
    xtx_inv: SymMatrix
    contrast_index: int = 1

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def coefficient(self) -> float:
        return float(self.beta[self.contrast_index])

    @property
    def contrast_row(self) -> np.ndarray:
        """r = c'(X'X)^-1 X', so the contrast estimate is r'y."""
        return (self.xtx_inv.entries @ self.x.T)[self.contrast_index]


def design_matrix(data: ExperimentData, kind: DesignKind) -> np.ndarray:
    """Columns (1, t), (1, t, z) or (1, t, z, t*z) with the centered z of data."""
    kind = DesignKind(kind)
    ones = np.ones(data.n)
    columns = [ones, data.t]
    if kind in (DesignKind.NONINTERACTED, DesignKind.INTERACTED):
        columns.append(data.z)
    if kind == DesignKind.INTERACTED:
        columns.append(data.t[:, None] * data.z)
    return np.column_stack(columns)


def fit_ols(y: np.ndarray, x: np.ndarray, contrast_index: int = 1, rel_tol: float = None) -> FitContext:
    """Least squares of y on x; the contrast selects the treatment coefficient."""
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"design of shape {x.shape} against {y.shape[0]} outcomes")
    if not 0 <= contrast_index < x.shape[1]:
        raise DataError(f"contrast index {contrast_index} outside {x.shape[1]} columns")

    xtx_inv = invert_spd(x.T @ x, rel_tol=rel_tol, name="X'X")
    beta = xtx_inv.entries @ (x.T @ y)
    residuals = y - x @ beta
    hat = np.einsum("ij,jk,ik->i", x, xtx_inv.entries, x)
    return FitContext(x=x, y=y, beta=beta, residuals=residuals, hat=hat,
                      xtx_inv=xtx_inv, contrast_index=contrast_index)


def _weights(ctx: FitContext, flavor: Flavor) -> np.ndarray:
    if np.any(ctx.hat >= LEVERAGE_CEILING):
        worst = int(np.argmax(ctx.hat))
        raise LeverageOne(f"hat value {ctx.hat[worst]:.15f} at unit {worst} is numerically one")
    one_minus_h = 1.0 - ctx.hat
    if Flavor(flavor).base == Flavor.HC3:
        return 1.0 / one_minus_h ** 2
    return 1.0 / one_minus_h


def hc_variance(ctx: FitContext, flavor: Flavor) -> float:
    """Sandwich variance of the contrast: sum_i r_i^2 w_i e_i^2."""
    w = _weights(ctx, flavor)
    r = ctx.contrast_row
    return float(np.sum(r * r * w * ctx.residuals ** 2))


def bc_residuals(ctx: FitContext, debiased_coef: float) -> FitContext:
    """Residuals with the treatment coefficient swapped for the debiased value."""
    if not np.isfinite(debiased_coef):
        raise DataError("debiased coefficient must be finite")
    beta = ctx.beta.copy()
    beta[ctx.contrast_index] = debiased_coef
    return replace(ctx, beta=beta, residuals=ctx.y - ctx.x @ beta)


def satterthwaite_df(ctx: FitContext, flavor: Flavor = Flavor.HC2) -> float:
    """Bell-McCaffrey degrees of freedom under a homoskedastic working model.

    With u_i = r_i / sqrt(1 - h_ii) (HC2) or r_i / (1 - h_ii) (HC3), the
    variance estimator is sigma^2 * e'diag(u^2)e and its first two moments
    give df = (sum u_i^2 (1 - h_ii))^2 / u^2' ((I-H) o (I-H)) u^2.
    """
    w = _weights(ctx, flavor)
    u2 = ctx.contrast_row ** 2 * w
    resid_maker = np.eye(ctx.n) - ctx.x @ ctx.xtx_inv.entries @ ctx.x.T
    numerator = float(np.sum(u2 * (1.0 - ctx.hat))) ** 2
    denominator = float(u2 @ (resid_maker * resid_maker) @ u2)
    if denominator <= 0.0 or numerator == 0.0:
        raise DegenerateSpectrum("Satterthwaite quadratic form has no positive eigenvalue")
    return numerator / denominator


def residual_df(ctx: FitContext) -> float:
    """Residual degrees of freedom n - rank(X)."""
    return float(ctx.n - np.linalg.matrix_rank(ctx.x))


def t_df(n: int, rank: int, rule: StudentDf = None) -> float:
    """Student-t degrees of freedom for n units and a design of the given rank."""
    rule = StudentDf(settings.T_DF if rule is None else rule)
    if rule == StudentDf.UNITS:
        return float(n - 1)
    return float(n - rank)


def student_df(ctx: FitContext, rule: StudentDf = None) -> float:
    return t_df(ctx.n, int(np.linalg.matrix_rank(ctx.x)), rule)
