"""Simulation populations built from quantile-spaced covariates."""
import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
import pandas as pd

from design.models import PotentialOutcomeTable
from dgp.quantiles import Distribution, QuantileSource
from linalg import SymMatrix, invert_spd, quadratic_forms
from utils.errors import DataError


logger = logging.getLogger(__name__)

SCHEMES: Dict[int, Tuple[QuantileSource, QuantileSource]] = {
    1: (QuantileSource(Distribution.BETA_HALF), QuantileSource(Distribution.TRIANGULAR)),
    2: (QuantileSource(Distribution.BETA_2_5), QuantileSource(Distribution.NORMAL)),
    3: (QuantileSource(Distribution.UNIFORM), QuantileSource(Distribution.UNIFORM, squared=True, reversed=True)),
    4: (QuantileSource(Distribution.UNIFORM), QuantileSource(Distribution.UNIFORM, squared=True)),
}

VARIANTS = (1, 2, 3)


@dataclass(frozen=True)
class SchemeSpec:
    scheme: int
    variant: int
    n: int
    dist1: QuantileSource
    dist2: QuantileSource
    leverage_intercept: bool = False

    @property
    def label(self) -> str:
        return f"DGP{self.scheme}.{self.variant}"

    @property
    def default_treated(self) -> int:
        return self.n // 3


@dataclass(frozen=True, eq=False)
class StudentizedLeverage:
    v: np.ndarray
    h: np.ndarray


def scheme_spec(scheme: int, variant: int, n: int = 24, leverage_intercept: bool = False) -> SchemeSpec:
    if scheme not in SCHEMES:
        raise DataError(f"unknown scheme {scheme}; choose from {sorted(SCHEMES)}")
    if variant not in VARIANTS:
        raise DataError(f"unknown variant {variant}; choose from {list(VARIANTS)}")
    if n < 4:
        raise DataError(f"population must have at least 4 units, got {n}")
    dist1, dist2 = SCHEMES[scheme]
    return SchemeSpec(scheme=scheme, variant=variant, n=n, dist1=dist1, dist2=dist2,
                      leverage_intercept=leverage_intercept)


def build_covariates(spec: SchemeSpec) -> np.ndarray:
    """n x 2 matrix of quantiles at i / (n + 1), i = 1..n."""
    return np.column_stack([spec.dist1.column(spec.n), spec.dist2.column(spec.n)])


def studentized_leverage(x: np.ndarray, intercept: bool = False) -> StudentizedLeverage:
    """Raw leverages v_i = x_i'(sum x x')^-1 x_i standardized to mean 0 and SD 1."""
    x = np.asarray(x, dtype=float)
    if intercept:
        x = np.column_stack([np.ones(x.shape[0]), x])
    gram_inv = invert_spd(SymMatrix(x.T @ x), name="sum x x'")
    v = quadratic_forms(x, gram_inv)
    sd = float(np.std(v, ddof=1))
    if sd == 0.0:
        raise DataError("leverages are constant; cannot studentize")
    return StudentizedLeverage(v=v, h=(v - v.mean()) / sd)


def _outcomes(variant: int, h: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(treated a, control b) for each variant."""
    if variant == 1:
        return 2.0 * h, np.zeros_like(h)
    if variant == 2:
        return h.copy(), -h
    return h.copy(), h.copy()


def build_table(spec: SchemeSpec) -> PotentialOutcomeTable:
    x = build_covariates(spec)
    lev = studentized_leverage(x, intercept=spec.leverage_intercept)
    a, b = _outcomes(spec.variant, lev.h)
    logger.debug(f"Built {spec.label} with n={spec.n}")
    return PotentialOutcomeTable(a=a, b=b, z=x)


def dgp_frame(spec: SchemeSpec) -> pd.DataFrame:
    """Columns X1, X2, v, h, Y0, Y1 of a generated population."""
    x = build_covariates(spec)
    lev = studentized_leverage(x, intercept=spec.leverage_intercept)
    a, b = _outcomes(spec.variant, lev.h)
    return pd.DataFrame({
        "X1": x[:, 0],
        "X2": x[:, 1],
        "v": lev.v,
        "h": lev.h,
        "Y0": b,
        "Y1": a,
    })
