"""Realizing experiments from potential outcomes and arm-wise statistics."""
import logging
from typing import Tuple

import numpy as np

from design.models import Assignment, ExperimentData, GroupStats, PotentialOutcomeTable
from utils.errors import DegenerateArm, SizeMismatch


logger = logging.getLogger(__name__)


def center_columns(z_raw) -> Tuple[np.ndarray, np.ndarray]:
    """Demean each covariate column; returns (centered, column means)."""
    z = np.array(z_raw, dtype=float)
    if z.ndim == 1:
        z = z.reshape(-1, 1)
    shift = z.mean(axis=0)
    return z - shift, shift


def realize(table: PotentialOutcomeTable, asn: Assignment) -> ExperimentData:
    """Observed dataset for one assignment: y_i = a_i if treated else b_i."""
    if asn.n != table.n:
        raise SizeMismatch(f"assignment is over {asn.n} units, table has {table.n}")
    t = asn.indicator()
    y = np.where(t == 1.0, table.a, table.b)
    z, shift = center_columns(table.z)
    return ExperimentData(y=y, t=t, z=z, centering_shift=shift)


def group_stats(data: ExperimentData) -> GroupStats:
    """Arm-wise means and cross moments."""
    mask = data.treated
    if data.n_a < 1 or data.n_b < 1:
        raise DegenerateArm("both arms must be nonempty")

    y, z = data.y, data.z
    y_a, y_b = y[mask], y[~mask]
    z_a, z_b = z[mask], z[~mask]
    return GroupStats(
        p_a=data.p_a,
        p_b=data.p_b,
        mean_y_a=float(y_a.mean()),
        mean_y_b=float(y_b.mean()),
        mean_z_a=z_a.mean(axis=0),
        mean_z_b=z_b.mean(axis=0),
        mean_yz_a=(y_a[:, None] * z_a).mean(axis=0),
        mean_yz_b=(y_b[:, None] * z_b).mean(axis=0),
        mean_zz_a=z_a.T @ z_a / data.n_a,
        mean_zz_b=z_b.T @ z_b / data.n_b,
        mean_zz=z.T @ z / data.n,
    )
