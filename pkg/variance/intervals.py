"""Critical values, confidence intervals and per-flavor variance reports."""
import math
from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel
from scipy import stats

from config import settings
from utils.errors import DataError, DomainError
from variance.sandwich import (
    FitContext,
    Flavor,
    StudentDf,
    bc_residuals,
    hc_variance,
    satterthwaite_df,
    student_df,
)


class CIMode(str, Enum):
    Z = "z"
    T = "t"
    SATTERTHWAITE = "satterthwaite"


Interval = Tuple[float, float]


def critical_value(mode: CIMode, df: Optional[float] = None, level: float = None) -> float:
    """Two-sided critical value at the given confidence level."""
    level = settings.CONFIDENCE_LEVEL if level is None else level
    if not 0.0 < level < 1.0:
        raise DomainError(f"confidence level must lie in (0, 1), got {level}")
    upper = 1.0 - (1.0 - level) / 2.0
    if CIMode(mode) == CIMode.Z:
        return float(stats.norm.ppf(upper))
    if df is None or not df > 0:
        raise DomainError(f"{CIMode(mode).value} interval needs positive degrees of freedom, got {df}")
    return float(stats.t.ppf(upper, df))


def confidence_interval(estimate: float, se: float, mode: CIMode = CIMode.Z,
                        df: Optional[float] = None, level: float = None) -> Interval:
    if se < 0 or math.isnan(se):
        raise DataError(f"standard error must be nonnegative, got {se}")
    half = critical_value(mode, df, level) * se
    return estimate - half, estimate + half


class VarianceReport(BaseModel):
    """Standard error, degrees of freedom and intervals for one flavor."""
    flavor: Flavor
    se: float
    df_t: float
    df_satt: float
    ci_z: Interval
    ci_t: Interval
    ci_satt: Interval


def variance_report(ctx: FitContext, flavor: Flavor, estimate: float,
                    level: float = None, t_rule: StudentDf = None) -> VarianceReport:
    """Intervals around estimate; BC flavors refit residuals at estimate."""
    flavor = Flavor(flavor)
    source = bc_residuals(ctx, estimate) if flavor.bias_corrected else ctx
    se = math.sqrt(hc_variance(source, flavor))
    df_t = student_df(ctx, t_rule)
    df_satt = satterthwaite_df(ctx, flavor.base)
    return VarianceReport(
        flavor=flavor,
        se=se,
        df_t=df_t,
        df_satt=df_satt,
        ci_z=confidence_interval(estimate, se, CIMode.Z, level=level),
        ci_t=confidence_interval(estimate, se, CIMode.T, df_t, level),
        ci_satt=confidence_interval(estimate, se, CIMode.SATTERTHWAITE, df_satt, level),
    )
