"""Report models and text rendering at three decimals."""
import json
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from database import SimulationRun
from estimators import ESTIMATOR_NAMES
from randomization import SCHEMA_VERSION, DistributionSummary
from variance import CIMode, StudentDf, VarianceReport


LABELS = {
    "unadjusted": "Unadjusted",
    "ols_ni": "OLS NI",
    "ols_i": "OLS I",
    "debiased_ni": "Debiased NI",
    "debiased_i": "Debiased I",
}

CI_LABELS = {CIMode.Z: "z", CIMode.T: "Student-t", CIMode.SATTERTHWAITE: "Satterthwaite"}


def _fmt(value: float) -> str:
    return f"{value:.3f}"


class EstimatorReport(BaseModel):
    """One estimator; estimate is None when it cannot be computed for this dataset."""
    name: str
    estimate: Optional[float] = None
    bias_correction: Optional[float] = 0.0
    correction_terms: Dict[str, float] = Field(default_factory=dict)
    variance: List[VarianceReport] = Field(default_factory=list)
    note: Optional[str] = None


class EstimateReport(BaseModel):
    """Point estimates, corrections and intervals for one dataset."""
    schema_version: int = SCHEMA_VERSION
    n: int
    n_a: int
    n_b: int
    k: int
    level: float
    t_rule: StudentDf = StudentDf.UNITS
    ci: List[CIMode]
    estimators: List[EstimatorReport]

    def estimator(self, name: str) -> EstimatorReport:
        for item in self.estimators:
            if item.name == name:
                return item
        raise KeyError(name)


def to_json(report: BaseModel) -> str:
    """Indented JSON with full float precision."""
    return json.dumps(report.model_dump(mode="json"), indent=2)


def render_estimate(report: EstimateReport) -> str:
    lines = [f"n={report.n}  n_A={report.n_a}  n_B={report.n_b}  K={report.k}  level={report.level:g}", ""]
    columns = ["estimate", "correction"]
    records = {}
    for item in report.estimators:
        row = {
            "estimate": np.nan if item.estimate is None else item.estimate,
            "correction": np.nan if item.bias_correction is None else item.bias_correction,
        }
        for var in item.variance:
            flavor = var.flavor.value.upper()
            row[f"se {flavor}"] = var.se
            for ci in report.ci:
                lower, upper = {CIMode.Z: var.ci_z, CIMode.T: var.ci_t, CIMode.SATTERTHWAITE: var.ci_satt}[ci]
                row[f"{flavor} {CI_LABELS[ci]}"] = f"[{_fmt(lower)}, {_fmt(upper)}]"
            for key in row:
                if key not in columns:
                    columns.append(key)
        records[LABELS.get(item.name, item.name)] = row
    frame = pd.DataFrame.from_dict(records, orient="index").reindex(columns=columns)
    lines.append(frame.to_string(na_rep="-", float_format=_fmt))
    notes = [f"{LABELS.get(item.name, item.name)}: {item.note}" for item in report.estimators if item.note]
    if notes:
        lines.extend(["", *notes])
    return "\n".join(lines)


def _header(summary: DistributionSummary, label: str) -> str:
    if summary.mode == "exact":
        how = f"exact over {summary.evaluated} of {summary.total_assignments} assignments"
    else:
        how = f"Monte Carlo, {summary.reps} draws, seed {summary.seed}"
    line = f"{label}  (n={summary.n}, n_A={summary.n_a}, {how})"
    if summary.skipped:
        line += f"  [{summary.skipped} singular assignments excluded]"
    return line


def render_summary(summary: DistributionSummary, label: str = "") -> str:
    """Bias, SD, RMSE and coverage rows, one column per estimator."""
    index = ["Bias", "SD", "RMSE"]
    data = {name: [] for name in ESTIMATOR_NAMES}
    for name in ESTIMATOR_NAMES:
        stats = summary.estimators[name]
        data[name] = [stats.bias, stats.sd, stats.rmse]

    seen = []
    for item in summary.intervals:
        key = (item.flavor, item.ci)
        if key not in seen:
            seen.append(key)
    for flavor, ci in seen:
        index.append(f"CI Coverage ({flavor.value.upper()}, {CI_LABELS[ci]})")
        for name in ESTIMATOR_NAMES:
            try:
                data[name].append(summary.interval(name, flavor, ci).coverage)
            except KeyError:
                data[name].append(np.nan)

    frame = pd.DataFrame(data, index=index).rename(columns=LABELS)
    return _header(summary, label) + "\n" + frame.to_string(na_rep="-", float_format=_fmt)


def render_ci_table(summary: DistributionSummary, label: str = "",
                    estimators: Sequence[str] = ("debiased_ni", "debiased_i")) -> str:
    """Coverage (%), average and median width of the debiased intervals."""
    blocks = []
    for title, field, scale in (("CI Coverage (%)", "coverage", 100.0),
                                ("CI Width, Average", "mean_width", 1.0),
                                ("CI Width, Median", "median_width", 1.0)):
        records = {}
        for name in estimators:
            row = {}
            for item in summary.intervals:
                if item.estimator == name:
                    row[f"{item.flavor.value.upper()} {CI_LABELS[item.ci]}"] = getattr(item, field) * scale
            records[LABELS[name]] = row
        frame = pd.DataFrame.from_dict(records, orient="index")
        blocks.append(f"{title}\n{frame.to_string(na_rep='-', float_format=_fmt)}")
    return _header(summary, label) + "\n" + "\n\n".join(blocks)


def summary_frame(summary: DistributionSummary) -> pd.DataFrame:
    """Long-format CSV view of a summary."""
    rows = []
    for name, stats in summary.estimators.items():
        for stat in ("mean", "bias", "sd", "rmse"):
            rows.append({"estimator": name, "flavor": "", "ci": "", "statistic": stat,
                         "value": getattr(stats, stat)})
    for item in summary.intervals:
        for stat in ("coverage", "mean_width", "median_width"):
            rows.append({"estimator": item.estimator, "flavor": item.flavor.value, "ci": item.ci.value,
                         "statistic": stat, "value": getattr(item, stat)})
    return pd.DataFrame(rows, columns=["estimator", "flavor", "ci", "statistic", "value"])


def estimate_frame(report: EstimateReport) -> pd.DataFrame:
    rows = []
    for item in report.estimators:
        base = {"estimator": item.name, "estimate": item.estimate, "correction": item.bias_correction,
                "note": item.note or ""}
        if not item.variance:
            rows.append(base)
        for var in item.variance:
            rows.append({
                **base,
                "flavor": var.flavor.value,
                "se": var.se,
                "df_t": var.df_t,
                "df_satt": var.df_satt,
                "ci_z_lower": var.ci_z[0], "ci_z_upper": var.ci_z[1],
                "ci_t_lower": var.ci_t[0], "ci_t_upper": var.ci_t[1],
                "ci_satt_lower": var.ci_satt[0], "ci_satt_upper": var.ci_satt[1],
            })
    return pd.DataFrame(rows)


def render_comparison(frame: pd.DataFrame, label: str = "") -> str:
    """Discrepancy table against the published values; only rows outside tolerance are listed."""
    misses = frame[~frame["within"]]
    title = f"{label}  {len(misses)} of {len(frame)} rows outside tolerance"
    if misses.empty:
        return title
    shown = misses.assign(estimator=misses["estimator"].map(lambda name: LABELS.get(name, name)))
    return title + "\n" + shown.drop(columns=["within"]).to_string(index=False, float_format=lambda v: f"{v:.4f}")


def render_runs(runs: Sequence[SimulationRun]) -> str:
    if not runs:
        return "No recorded runs"
    rows = []
    for run in runs:
        record = run.to_dict()
        record.pop("summary")
        record["created_at"] = record["created_at"][:16].replace("T", " ") if record["created_at"] else ""
        rows.append({key: "-" if value is None else value for key, value in record.items()})
    columns = ["id", "created_at", "dgp", "n", "n_treated", "mode", "reps", "seed", "evaluated", "skipped"]
    frame = pd.DataFrame(rows, columns=columns)
    return frame.to_string(index=False)
