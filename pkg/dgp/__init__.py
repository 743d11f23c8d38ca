"""Simulation data-generating processes."""
from dgp.quantiles import Distribution, QuantileSource, quantile
from dgp.reference import REFERENCE, compare_to_reference, has_reference
from dgp.schemes import (
    SCHEMES,
    SchemeSpec,
    StudentizedLeverage,
    build_covariates,
    build_table,
    dgp_frame,
    scheme_spec,
    studentized_leverage,
)

__all__ = [
    "Distribution", "QuantileSource", "quantile",
    "SCHEMES", "SchemeSpec", "StudentizedLeverage", "build_covariates",
    "build_table", "dgp_frame", "scheme_spec", "studentized_leverage",
    "REFERENCE", "compare_to_reference", "has_reference",
]
