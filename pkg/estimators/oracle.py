"""Oracle decomposition of the OLS covariate coefficients.

Needs both potential outcomes, so it is only available for simulated
populations. Used to audit the bias estimators term by term.
"""
from dataclasses import dataclass

import numpy as np

from design.experiment import center_columns, realize
from design.models import Assignment, PotentialOutcomeTable
from estimators.regression import regression_components


@dataclass(frozen=True, eq=False)
class BiasDecomposition:
    """Q_hat = q + nu1 + nu2 + nu3 and Q_hat_X = q_X + nu1_X + nu2_X for each arm X."""
    q: np.ndarray
    nu1: np.ndarray
    nu2: np.ndarray
    nu3: np.ndarray
    q_hat: np.ndarray
    q_a: np.ndarray
    nu1_a: np.ndarray
    nu2_a: np.ndarray
    q_hat_a: np.ndarray
    q_b: np.ndarray
    nu1_b: np.ndarray
    nu2_b: np.ndarray
    q_hat_b: np.ndarray
    mean_z_a: np.ndarray
    mean_z_b: np.ndarray

    @property
    def reconstruction_residual(self) -> float:
        return float(max(
            np.max(np.abs(self.q + self.nu1 + self.nu2 + self.nu3 - self.q_hat)),
            np.max(np.abs(self.q_a + self.nu1_a + self.nu2_a - self.q_hat_a)),
            np.max(np.abs(self.q_b + self.nu1_b + self.nu2_b - self.q_hat_b)),
        ))

    @property
    def ni_bias_contribution(self) -> float:
        """(z_bar_B - z_bar_A)'(nu1 + nu2 + nu3): the random part of the NI coefficient error."""
        return float((self.mean_z_b - self.mean_z_a) @ (self.nu1 + self.nu2 + self.nu3))

    @property
    def i_bias_contribution(self) -> float:
        return float(self.mean_z_b @ (self.nu1_b + self.nu2_b) - self.mean_z_a @ (self.nu1_a + self.nu2_a))


def decompose_bias_oracle(table: PotentialOutcomeTable, asn: Assignment) -> BiasDecomposition:
    data = realize(table, asn)
    c = regression_components(data)
    mask = data.treated
    z, _ = center_columns(table.z)
    a, b = table.a, table.b
    a_star, b_star = table.a_star, table.b_star
    d_inv = c.d_inv.entries
    p_a, p_b = c.p_a, c.p_b

    az = a[:, None] * z
    bz = b[:, None] * z
    a_star_z = a_star[:, None] * z
    b_star_z = b_star[:, None] * z

    n_a_pop = az.mean(axis=0)
    n_b_pop = bz.mean(axis=0)
    n_pop = p_a * n_a_pop + p_b * n_b_pop

    nu1 = d_inv @ (
        p_a * (a_star_z[mask].mean(axis=0) - a_star_z.mean(axis=0))
        + p_b * (b_star_z[~mask].mean(axis=0) - b_star_z.mean(axis=0))
    )
    nu2 = (c.d_hat_inv.entries - d_inv) @ c.n_hat
    nu3 = -d_inv @ (
        p_a * a_star[mask].mean() * c.mean_z_a
        + p_b * b_star[~mask].mean() * c.mean_z_b
    )

    return BiasDecomposition(
        q=d_inv @ n_pop,
        nu1=nu1,
        nu2=nu2,
        nu3=nu3,
        q_hat=c.q_hat,
        q_a=d_inv @ n_a_pop,
        nu1_a=(c.d_hat_a_inv.entries - d_inv) @ c.n_hat_a,
        nu2_a=d_inv @ (c.n_hat_a - n_a_pop),
        q_hat_a=c.q_hat_a,
        q_b=d_inv @ n_b_pop,
        nu1_b=(c.d_hat_b_inv.entries - d_inv) @ c.n_hat_b,
        nu2_b=d_inv @ (c.n_hat_b - n_b_pop),
        q_hat_b=c.q_hat_b,
        mean_z_a=c.mean_z_a,
        mean_z_b=c.mean_z_b,
    )
