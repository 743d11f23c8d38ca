"""Per-assignment record layout and distribution summaries."""
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy import stats

from config import settings
from estimators import ESTIMATOR_NAMES
from variance import CIMode, DesignKind, Flavor, StudentDf, t_df


SCHEMA_VERSION = 1

FIT_OF_ESTIMATOR = {
    "unadjusted": DesignKind.UNADJUSTED,
    "ols_ni": DesignKind.NONINTERACTED,
    "debiased_ni": DesignKind.NONINTERACTED,
    "ols_i": DesignKind.INTERACTED,
    "debiased_i": DesignKind.INTERACTED,
}


def design_width(kind: DesignKind, k: int) -> int:
    """Number of columns of each design."""
    return {DesignKind.UNADJUSTED: 2, DesignKind.NONINTERACTED: 2 + k, DesignKind.INTERACTED: 2 + 2 * k}[kind]


@dataclass(frozen=True)
class RecordLayout:
    """Column order of the per-assignment record matrix."""
    flavors: Tuple[Flavor, ...]

    @property
    def series(self) -> List[Tuple[str, Flavor]]:
        """(estimator, flavor) pairs that get a standard error; BC flavors only apply to debiased estimators."""
        return [
            (name, flavor)
            for name in ESTIMATOR_NAMES
            for flavor in self.flavors
            if not flavor.bias_corrected or name.startswith("debiased")
        ]

    @property
    def bases(self) -> List[Flavor]:
        return sorted({f.base for f in self.flavors}, key=lambda f: f.value)

    @property
    def columns(self) -> List[str]:
        columns = [f"est:{name}" for name in ESTIMATOR_NAMES]
        columns += [f"se:{name}:{flavor.value}" for name, flavor in self.series]
        columns += [f"df:{kind.value}:{base.value}" for kind in DesignKind for base in self.bases]
        return columns

    def index(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.columns)}


class EstimatorSummary(BaseModel):
    mean: float
    bias: float
    sd: float
    rmse: float
    mc_se: Optional[Dict[str, float]] = None


class IntervalSummary(BaseModel):
    estimator: str
    flavor: Flavor
    ci: CIMode
    coverage: float
    mean_width: float
    median_width: float
    mc_se_coverage: Optional[float] = None
    mc_se_mean_width: Optional[float] = None


class DistributionSummary(BaseModel):
    """Randomization distribution of every estimator and interval."""
    schema_version: int = SCHEMA_VERSION
    mode: str
    n: int
    n_a: int
    k: int
    total_assignments: int
    evaluated: int
    skipped: int = 0
    true_ate: float
    level: float
    t_rule: StudentDf = StudentDf.UNITS
    seed: Optional[int] = None
    reps: Optional[int] = None
    estimators: Dict[str, EstimatorSummary] = Field(default_factory=dict)
    intervals: List[IntervalSummary] = Field(default_factory=list)

    def interval(self, estimator: str, flavor: Flavor, ci: CIMode) -> IntervalSummary:
        for item in self.intervals:
            if item.estimator == estimator and item.flavor == Flavor(flavor) and item.ci == CIMode(ci):
                return item
        raise KeyError(f"no interval summary for {estimator}/{Flavor(flavor).value}/{CIMode(ci).value}")


def _mean(values: np.ndarray) -> float:
    return math.fsum(values.tolist()) / len(values)


def lower_median(values: np.ndarray) -> float:
    """Lower median: the ((m - 1) // 2)-th order statistic."""
    ordered = np.sort(values)
    return float(ordered[(len(ordered) - 1) // 2])


def critical_values(ci: CIMode, df, level: float):
    """Vectorized two-sided critical values; df may be an array."""
    upper = 1.0 - (1.0 - level) / 2.0
    if ci == CIMode.Z:
        return stats.norm.ppf(upper)
    return stats.t.ppf(upper, df)


def interval_half_widths(rows: np.ndarray, layout: RecordLayout, estimator: str, flavor: Flavor,
                         ci: CIMode, n: int, k: int, level: float, t_rule: StudentDf = None) -> np.ndarray:
    idx = layout.index()
    se = rows[:, idx[f"se:{estimator}:{flavor.value}"]]
    kind = FIT_OF_ESTIMATOR[estimator]
    if ci == CIMode.SATTERTHWAITE:
        df = rows[:, idx[f"df:{kind.value}:{flavor.base.value}"]]
    else:
        df = t_df(n, design_width(kind, k), t_rule)
    return critical_values(ci, df, level) * se


def summarize(rows: np.ndarray, layout: RecordLayout, true_ate: float, n: int, n_a: int, k: int,
              mode: str, total_assignments: int, ci_modes: Sequence[CIMode] = tuple(CIMode),
              level: float = None, skipped: int = 0, seed: int = None, reps: int = None,
              monte_carlo: bool = False, t_rule: StudentDf = None) -> DistributionSummary:
    """Aggregate rank-ordered records; sums are exactly rounded so chunking never matters."""
    level = settings.CONFIDENCE_LEVEL if level is None else level
    t_rule = StudentDf(settings.T_DF if t_rule is None else t_rule)
    count = rows.shape[0]
    if count == 0:
        raise ValueError("no assignments were evaluated")
    idx = layout.index()

    estimators = {}
    for name in ESTIMATOR_NAMES:
        x = rows[:, idx[f"est:{name}"]]
        mean = _mean(x)
        sd = math.sqrt(_mean((x - mean) ** 2))
        sq_err = (x - true_ate) ** 2
        rmse = math.sqrt(_mean(sq_err))
        mc_se = None
        if monte_carlo and count > 1:
            sq_sd = math.sqrt(_mean((sq_err - rmse ** 2) ** 2))
            mc_se = {
                "mean": sd / math.sqrt(count),
                "bias": sd / math.sqrt(count),
                "sd": sd / math.sqrt(2 * (count - 1)),
                "rmse": sq_sd / (2 * rmse * math.sqrt(count)) if rmse > 0 else 0.0,
            }
        estimators[name] = EstimatorSummary(mean=mean, bias=mean - true_ate, sd=sd, rmse=rmse, mc_se=mc_se)

    intervals = []
    for name, flavor in layout.series:
        x = rows[:, idx[f"est:{name}"]]
        for ci in ci_modes:
            ci = CIMode(ci)
            half = interval_half_widths(rows, layout, name, flavor, ci, n, k, level, t_rule)
            covered = np.abs(x - true_ate) <= half
            coverage = _mean(covered.astype(float))
            widths = 2.0 * half
            item = IntervalSummary(
                estimator=name,
                flavor=flavor,
                ci=ci,
                coverage=coverage,
                mean_width=_mean(widths),
                median_width=lower_median(widths),
            )
            if monte_carlo and count > 1:
                item.mc_se_coverage = math.sqrt(coverage * (1.0 - coverage) / count)
                item.mc_se_mean_width = float(np.std(widths, ddof=1)) / math.sqrt(count)
            intervals.append(item)

    return DistributionSummary(
        mode=mode,
        n=n,
        n_a=n_a,
        k=k,
        total_assignments=total_assignments,
        evaluated=count,
        skipped=skipped,
        true_ate=true_ate,
        level=level,
        t_rule=t_rule,
        seed=seed,
        reps=reps,
        estimators=estimators,
        intervals=intervals,
    )
