"""Robust variance estimation and confidence intervals."""
from variance.sandwich import (
    DesignKind,
    FitContext,
    Flavor,
    StudentDf,
    bc_residuals,
    design_matrix,
    fit_ols,
    hc_variance,
    residual_df,
    satterthwaite_df,
    student_df,
    t_df,
)
from variance.intervals import (
    CIMode,
    VarianceReport,
    confidence_interval,
    critical_value,
    variance_report,
)

__all__ = [
    "DesignKind", "FitContext", "Flavor", "bc_residuals", "design_matrix",
    "fit_ols", "hc_variance", "residual_df", "satterthwaite_df",
    "StudentDf", "student_df", "t_df",
    "CIMode", "VarianceReport", "confidence_interval", "critical_value",
    "variance_report",
]
