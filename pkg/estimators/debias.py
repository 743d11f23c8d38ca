"""Unbiased estimators of the OLS bias and the debiased ATE estimators."""
import logging
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from design.models import ExperimentData
from estimators.constants import BiasConstants, bias_constants
from estimators.regression import (
    RegressionComponents,
    ate_interacted,
    ate_noninteracted,
    diff_in_means,
    leverages,
    regression_components,
)
from linalg import quadratic_forms


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BiasTerms:
    """Summands of a bias estimate, in the order they are added."""
    kind: str
    terms: Dict[str, float] = field(default_factory=dict)

    @property
    def total(self) -> float:
        total = 0.0
        for value in self.terms.values():
            total += value
        return total


@dataclass(frozen=True, eq=False)
class EstimateSet:
    """All five point estimates of one realized dataset."""
    unadjusted: float
    ols_ni: float
    ols_i: float
    terms_ni: BiasTerms
    terms_i: BiasTerms

    @property
    def debiased_ni(self) -> float:
        return self.ols_ni - self.terms_ni.total

    @property
    def debiased_i(self) -> float:
        return self.ols_i - self.terms_i.total

    def as_dict(self) -> Dict[str, float]:
        return {
            "unadjusted": self.unadjusted,
            "ols_ni": self.ols_ni,
            "ols_i": self.ols_i,
            "debiased_ni": self.debiased_ni,
            "debiased_i": self.debiased_i,
        }


def _leverage_cov(h: np.ndarray, y: np.ndarray) -> float:
    """Arm covariance of (h, y) with divisor n_arm."""
    return float(np.mean((h - h.mean()) * (y - y.mean())))


def _centered_third_moment_sum(z: np.ndarray, y: np.ndarray, d_inv) -> float:
    """sum_i (z_i - z_bar)' D^-1 (z_i - z_bar) (y_i - y_bar) over one arm."""
    q = quadratic_forms(z - z.mean(axis=0), d_inv)
    return float(np.sum(q * (y - y.mean())))


def _prepare(data: ExperimentData, constants: BiasConstants, components: RegressionComponents,
             include_arms: bool):
    if constants is None:
        constants = bias_constants(data.n, data.n_a)
    if components is None or (include_arms and not components.has_arms):
        components = regression_components(data, include_arms=include_arms)
    return constants, components


def bias_terms_ni(data: ExperimentData, constants: BiasConstants = None,
                  components: RegressionComponents = None) -> BiasTerms:
    """The five summands of the non-interacted bias estimate."""
    constants, c = _prepare(data, constants, components, include_arms=False)
    n, n_a, n_b = data.n, data.n_a, data.n_b
    mask = data.treated
    h = leverages(data, d_inv=c.d_inv).h
    y_a, y_b = data.y[mask], data.y[~mask]
    z_a, z_b = data.z[mask], data.z[~mask]

    gap = (c.d_hat_inv.entries - c.d_inv.entries) @ c.n_hat
    terms = {
        "leverage_cov_b": n_b / (n_b - 1) / n * _leverage_cov(h[~mask], y_b),
        "leverage_cov_a": -n_a / (n_a - 1) / n * _leverage_cov(h[mask], y_a),
        "coefficient_gap": float((c.mean_z_b - c.mean_z_a) @ gap),
        "third_moment_a": constants.c_a_ni / n_a * _centered_third_moment_sum(z_a, y_a, c.d_inv),
        "third_moment_b": -constants.c_b_ni / n_b * _centered_third_moment_sum(z_b, y_b, c.d_inv),
    }
    return BiasTerms(kind="ni", terms=terms)


def bias_terms_i(data: ExperimentData, constants: BiasConstants = None,
                 components: RegressionComponents = None) -> BiasTerms:
    """The six summands of the interacted bias estimate."""
    constants, c = _prepare(data, constants, components, include_arms=True)
    n, n_a, n_b = data.n, data.n_a, data.n_b
    mask = data.treated
    h = leverages(data, d_inv=c.d_inv).h
    y_a, y_b = data.y[mask], data.y[~mask]
    z_a, z_b = data.z[mask], data.z[~mask]

    gap_b = (c.d_hat_b_inv.entries - c.d_inv.entries) @ c.n_hat_b
    gap_a = (c.d_hat_a_inv.entries - c.d_inv.entries) @ c.n_hat_a
    terms = {
        "leverage_cov_b": n_a / (n_b - 1) / n * _leverage_cov(h[~mask], y_b),
        "coefficient_gap_b": float(c.mean_z_b @ gap_b),
        "third_moment_b": -constants.c_b_i / n_b * _centered_third_moment_sum(z_b, y_b, c.d_inv),
        "leverage_cov_a": -n_b / (n_a - 1) / n * _leverage_cov(h[mask], y_a),
        "coefficient_gap_a": -float(c.mean_z_a @ gap_a),
        "third_moment_a": constants.c_a_i / n_a * _centered_third_moment_sum(z_a, y_a, c.d_inv),
    }
    return BiasTerms(kind="i", terms=terms)


def bias_estimate_ni(data: ExperimentData, constants: BiasConstants = None) -> float:
    return bias_terms_ni(data, constants).total


def bias_estimate_i(data: ExperimentData, constants: BiasConstants = None) -> float:
    return bias_terms_i(data, constants).total


def ate_debiased_ni(data: ExperimentData, constants: BiasConstants = None) -> float:
    """Non-interacted OLS estimate minus its estimated bias."""
    c = regression_components(data, include_arms=False)
    return ate_noninteracted(data, c) - bias_terms_ni(data, constants, c).total


def ate_debiased_i(data: ExperimentData, constants: BiasConstants = None) -> float:
    """Interacted OLS estimate minus its estimated bias."""
    c = regression_components(data)
    return ate_interacted(data, c) - bias_terms_i(data, constants, c).total


def estimate_all(data: ExperimentData, constants: BiasConstants = None,
                 rel_tol: float = None) -> EstimateSet:
    """Compute every estimator from a single set of regression components."""
    if constants is None:
        constants = bias_constants(data.n, data.n_a)
    c = regression_components(data, rel_tol=rel_tol)
    return EstimateSet(
        unadjusted=diff_in_means(data),
        ols_ni=ate_noninteracted(data, c),
        ols_i=ate_interacted(data, c),
        terms_ni=bias_terms_ni(data, constants, c),
        terms_i=bias_terms_i(data, constants, c),
    )
