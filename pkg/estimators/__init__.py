"""ATE estimators and their finite-sample bias corrections."""
from estimators.regression import (
    Leverages,
    RegressionComponents,
    ate_interacted,
    ate_noninteracted,
    diff_in_means,
    leverages,
    regression_components,
)
from estimators.constants import (
    CONSTANT_NAMES,
    DISPLAY_NAMES,
    BiasConstants,
    bias_constants,
    rational_bias_constants,
)
from estimators.debias import (
    BiasTerms,
    EstimateSet,
    ate_debiased_i,
    ate_debiased_ni,
    bias_estimate_i,
    bias_estimate_ni,
    bias_terms_i,
    bias_terms_ni,
    estimate_all,
)
from estimators.oracle import BiasDecomposition, decompose_bias_oracle

ESTIMATOR_NAMES = ("unadjusted", "ols_ni", "ols_i", "debiased_ni", "debiased_i")

__all__ = [
    "Leverages", "RegressionComponents", "ate_interacted", "ate_noninteracted",
    "diff_in_means", "leverages", "regression_components",
    "CONSTANT_NAMES", "DISPLAY_NAMES", "BiasConstants", "bias_constants",
    "rational_bias_constants",
    "BiasTerms", "EstimateSet", "ate_debiased_i", "ate_debiased_ni",
    "bias_estimate_i", "bias_estimate_ni", "bias_terms_i", "bias_terms_ni",
    "estimate_all",
    "BiasDecomposition", "decompose_bias_oracle",
    "ESTIMATOR_NAMES",
]
