"""Difference-in-means and OLS regression-adjusted ATE estimators."""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from design.models import ExperimentData
from linalg import SymMatrix, invert_spd, quadratic_forms
from utils.errors import DegenerateArm


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RegressionComponents:
    """Moment matrices and covariate coefficients of the adjusted fits.

    d is the population second moment of the centered covariates; d_hat is
    the pooled within-arm covariance of the non-interacted fit and d_hat_a,
    d_hat_b the per-arm covariances of the interacted fit. n_pop_like is the
    arm-observable analog p_A*mean(yz)_A + p_B*mean(yz)_B of N.
    """
    p_a: float
    p_b: float
    mean_y_a: float
    mean_y_b: float
    mean_z_a: np.ndarray
    mean_z_b: np.ndarray
    d: SymMatrix
    d_inv: SymMatrix
    d_hat: SymMatrix
    d_hat_inv: SymMatrix
    n_hat: np.ndarray
    n_pop_like: np.ndarray
    q_hat: np.ndarray
    d_hat_a: Optional[SymMatrix] = None
    d_hat_b: Optional[SymMatrix] = None
    d_hat_a_inv: Optional[SymMatrix] = None
    d_hat_b_inv: Optional[SymMatrix] = None
    n_hat_a: Optional[np.ndarray] = None
    n_hat_b: Optional[np.ndarray] = None
    q_hat_a: Optional[np.ndarray] = None
    q_hat_b: Optional[np.ndarray] = None

    @property
    def has_arms(self) -> bool:
        return self.q_hat_a is not None


@dataclass(frozen=True, eq=False)
class Leverages:
    """Rescaled leverages h_i = z_i' D^-1 z_i."""
    h: np.ndarray

    @property
    def mean(self) -> float:
        return float(np.mean(self.h))


def _arm_moments(y: np.ndarray, z: np.ndarray):
    """Arm covariance of z and cross covariance of (y, z), divisor n_arm."""
    y_c = y - y.mean()
    z_c = z - z.mean(axis=0)
    cov_zz = z_c.T @ z_c / len(y)
    cov_yz = (y_c[:, None] * z_c).mean(axis=0)
    return cov_zz, cov_yz


def diff_in_means(data: ExperimentData) -> float:
    """Unadjusted estimator: treated mean minus control mean."""
    mask = data.treated
    if data.n_a < 1 or data.n_b < 1:
        raise DegenerateArm("both arms must be nonempty")
    return float(data.y[mask].mean() - data.y[~mask].mean())


def regression_components(data: ExperimentData, include_arms: bool = True,
                          rel_tol: float = None) -> RegressionComponents:
    """Build D, D_hat, N_hat and the coefficient vectors Q_hat (and per-arm Q_hat_A, Q_hat_B)."""
    mask = data.treated
    y_a, y_b = data.y[mask], data.y[~mask]
    z_a, z_b = data.z[mask], data.z[~mask]
    p_a, p_b = data.p_a, data.p_b

    d = SymMatrix(data.z.T @ data.z / data.n)
    d_inv = invert_spd(d, rel_tol=rel_tol, name="D")

    cov_zz_a, cov_yz_a = _arm_moments(y_a, z_a)
    cov_zz_b, cov_yz_b = _arm_moments(y_b, z_b)

    # Pooled within-arm moments equal the definitional
    # mean(zz') - p_A zA zA' - p_B zB zB' form.
    d_hat = SymMatrix(p_a * cov_zz_a + p_b * cov_zz_b)
    n_hat = p_a * cov_yz_a + p_b * cov_yz_b
    d_hat_inv = invert_spd(d_hat, rel_tol=rel_tol, name="D_hat")
    q_hat = d_hat_inv @ n_hat

    n_pop_like = p_a * (y_a[:, None] * z_a).mean(axis=0) + p_b * (y_b[:, None] * z_b).mean(axis=0)

    fields = dict(
        p_a=p_a, p_b=p_b,
        mean_y_a=float(y_a.mean()), mean_y_b=float(y_b.mean()),
        mean_z_a=z_a.mean(axis=0), mean_z_b=z_b.mean(axis=0),
        d=d, d_inv=d_inv, d_hat=d_hat, d_hat_inv=d_hat_inv,
        n_hat=n_hat, n_pop_like=n_pop_like, q_hat=q_hat,
    )

    if include_arms:
        d_hat_a = SymMatrix(cov_zz_a)
        d_hat_b = SymMatrix(cov_zz_b)
        d_hat_a_inv = invert_spd(d_hat_a, rel_tol=rel_tol, name="D_hat_A")
        d_hat_b_inv = invert_spd(d_hat_b, rel_tol=rel_tol, name="D_hat_B")
        fields.update(
            d_hat_a=d_hat_a, d_hat_b=d_hat_b,
            d_hat_a_inv=d_hat_a_inv, d_hat_b_inv=d_hat_b_inv,
            n_hat_a=cov_yz_a, n_hat_b=cov_yz_b,
            q_hat_a=d_hat_a_inv @ cov_yz_a,
            q_hat_b=d_hat_b_inv @ cov_yz_b,
        )

    return RegressionComponents(**fields)


def ate_noninteracted(data: ExperimentData, components: RegressionComponents = None) -> float:
    """Treatment coefficient of OLS of y on (1, t, z)."""
    c = components or regression_components(data, include_arms=False)
    return float(c.mean_y_a - c.mean_y_b - (c.mean_z_a - c.mean_z_b) @ c.q_hat)


def ate_interacted(data: ExperimentData, components: RegressionComponents = None) -> float:
    """Treatment coefficient of OLS of y on (1, t, z, t*z) with centered z."""
    c = components if components is not None and components.has_arms else regression_components(data)
    return float(c.mean_y_a - c.mean_y_b - (c.mean_z_a @ c.q_hat_a - c.mean_z_b @ c.q_hat_b))


def leverages(data: ExperimentData, d_inv: SymMatrix = None, rel_tol: float = None) -> Leverages:
    """Rescaled leverages; their mean equals K."""
    if d_inv is None:
        d_inv = invert_spd(SymMatrix(data.z.T @ data.z / data.n), rel_tol=rel_tol, name="D")
    return Leverages(h=quadratic_forms(data.z, d_inv))
