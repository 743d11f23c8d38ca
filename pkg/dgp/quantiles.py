"""Quantile functions of the covariate source distributions."""
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq
from scipy.special import betainc, ndtri

from utils.errors import DomainError


class Distribution(str, Enum):
    BETA_HALF = "beta(0.5,0.5)"
    BETA_2_5 = "beta(2,5)"
    TRIANGULAR = "triangular(0,1)"
    NORMAL = "normal(0,1)"
    UNIFORM = "uniform(0,1)"


def _beta_2_5(p: float) -> float:
    return brentq(lambda x: betainc(2.0, 5.0, x) - p, 0.0, 1.0, xtol=1e-14, rtol=4 * np.finfo(float).eps)


def quantile(dist: Distribution, p: float) -> float:
    """Inverse CDF at p in (0, 1)."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"quantile level must lie in (0, 1), got {p}")
    dist = Distribution(dist)
    if dist == Distribution.BETA_HALF:
        return math.sin(math.pi * p / 2.0) ** 2
    if dist == Distribution.BETA_2_5:
        return _beta_2_5(p)
    if dist == Distribution.TRIANGULAR:
        return math.sqrt(p / 2.0) if p < 0.5 else 1.0 - math.sqrt((1.0 - p) / 2.0)
    if dist == Distribution.NORMAL:
        return float(ndtri(p))
    return p


@dataclass(frozen=True)
class QuantileSource:
    """A covariate column: quantiles of dist, optionally squared, then optionally reversed."""
    dist: Distribution
    squared: bool = False
    reversed: bool = False

    @property
    def label(self) -> str:
        label = self.dist.value
        if self.squared:
            label += " squared"
        if self.reversed:
            label += " reversed"
        return label

    def column(self, n: int) -> np.ndarray:
        values = np.array([quantile(self.dist, i / (n + 1)) for i in range(1, n + 1)])
        if self.squared:
            values = values ** 2
        if self.reversed:
            values = values[::-1].copy()
        return values
