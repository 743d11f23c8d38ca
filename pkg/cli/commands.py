"""Command implementations behind main.py."""
import logging
import time
from pathlib import Path
from typing import List, Optional, Tuple, Union

import pandas as pd

from cli.config import RunConfig
from cli.report import (
    EstimateReport,
    EstimatorReport,
    estimate_frame,
    summary_frame,
    to_json,
)
from cli.verify import CheckResult, run_verification
from config import settings
from database import SimulationRun, registry
from design import ExperimentData, ingest_csv
from dgp import build_table, compare_to_reference, dgp_frame, has_reference, scheme_spec
from estimators import (
    ESTIMATOR_NAMES,
    BiasConstants,
    BiasTerms,
    ate_interacted,
    ate_noninteracted,
    bias_constants,
    bias_terms_i,
    bias_terms_ni,
    diff_in_means,
)
from randomization import AssignmentSpace, DistributionSummary, RandomizationEngine
from randomization.summary import FIT_OF_ESTIMATOR
from utils.errors import ArmTooSmall, ModelError
from variance import CIMode, design_matrix, fit_ols, variance_report


logger = logging.getLogger(__name__)


def output_path(path: Union[str, Path]) -> Path:
    """Relative output paths are placed under OUTPUT_DIR."""
    path = Path(path)
    if not path.is_absolute():
        path = Path(settings.OUTPUT_DIR) / path
    return path


def _write(path: Union[str, Path], text: str) -> Path:
    path = output_path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {path}")
    return path


def _write_frame(path: Union[str, Path], frame: pd.DataFrame) -> Path:
    path = output_path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g")
    logger.info(f"Wrote {path}")
    return path


def _point_estimate(name: str, data: ExperimentData,
                    constants: Union[BiasConstants, ArmTooSmall]) -> Tuple[float, Optional[BiasTerms]]:
    if name == "unadjusted":
        return diff_in_means(data), None
    if name == "ols_ni":
        return ate_noninteracted(data), None
    if name == "ols_i":
        return ate_interacted(data), None
    if isinstance(constants, ArmTooSmall):
        raise constants
    if name == "debiased_ni":
        terms = bias_terms_ni(data, constants)
        return ate_noninteracted(data) - terms.total, terms
    terms = bias_terms_i(data, constants)
    return ate_interacted(data) - terms.total, terms


def cmd_estimate(config: RunConfig) -> EstimateReport:
    """Five estimators with corrections and intervals for one CSV dataset.

    An estimator that cannot be computed (arm too small for the bias
    constants, singular arm covariances) is reported without an estimate
    and with a note; the others are unaffected.
    """
    data = ingest_csv(config.input, y_col=config.y_col, t_col=config.t_col, z_cols=config.z_cols)
    try:
        constants = bias_constants(data.n, data.n_a)
    except ArmTooSmall as e:
        constants = e
    level = settings.CONFIDENCE_LEVEL if config.level is None else config.level
    fits = {}

    reports = []
    for name in ESTIMATOR_NAMES:
        try:
            estimate, terms = _point_estimate(name, data, constants)
        except (ArmTooSmall, ModelError) as e:
            logger.warning(f"{name} unavailable: {e}")
            reports.append(EstimatorReport(name=name, bias_correction=None, note=str(e)))
            continue

        kind = FIT_OF_ESTIMATOR[name]
        flavors = [f for f in config.flavors if not f.bias_corrected or name.startswith("debiased")]
        note = None
        try:
            if kind not in fits:
                fits[kind] = fit_ols(data.y, design_matrix(data, kind))
            variance = [variance_report(fits[kind], flavor, estimate, level, config.t_df) for flavor in flavors]
        except ModelError as e:
            logger.warning(f"No standard errors for {name}: {e}")
            variance, note = [], f"standard errors unavailable: {e}"

        reports.append(EstimatorReport(
            name=name,
            estimate=estimate,
            bias_correction=terms.total if terms is not None else 0.0,
            correction_terms=dict(terms.terms) if terms is not None else {},
            variance=variance,
            note=note,
        ))

    t_rule = config.t_df or settings.T_DF
    report = EstimateReport(n=data.n, n_a=data.n_a, n_b=data.n_b, k=data.k, level=level,
                            t_rule=t_rule, ci=config.ci, estimators=reports)
    if config.out:
        if config.format == "csv":
            _write_frame(config.out, estimate_frame(report))
        else:
            _write(config.out, to_json(report))
    return report


def _simulate(config: RunConfig, leverage_intercept: bool) -> Tuple[DistributionSummary, RandomizationEngine, float]:
    spec = scheme_spec(config.scheme, config.variant, n=config.n,
                       leverage_intercept=leverage_intercept)
    table = build_table(spec)
    space = AssignmentSpace(spec.n, config.treated_count)
    engine = RandomizationEngine(
        flavors=config.flavors,
        ci_modes=config.ci,
        threads=config.threads,
        budget=config.budget,
        skip_singular=config.skip_singular,
        level=config.level,
        t_rule=config.t_df,
    )

    logger.info(f"Simulating {spec.label} (n={spec.n}, n_A={space.n_a}, mode={config.mode})")
    started = time.perf_counter()
    if config.mode == "exact":
        summary = engine.exact_distribution(table, space)
    else:
        summary = engine.monte_carlo_distribution(table, space, seed=config.seed, reps=config.reps)
    return summary, engine, time.perf_counter() - started


def cmd_simulate(config: RunConfig) -> DistributionSummary:
    """Exact or Monte Carlo randomization distribution of one scheme."""
    summary, engine, elapsed = _simulate(config, config.leverage_intercept)

    if config.out:
        if config.format == "csv":
            _write_frame(config.out, summary_frame(summary))
        else:
            _write(config.out, to_json(summary))
    if config.dump_assignments:
        _write_frame(config.dump_assignments, engine.records_frame())

    if settings.RECORD_RUNS:
        registry.record_run(
            command="simulate",
            summary_json=summary.model_dump_json(),
            n=summary.n,
            n_treated=summary.n_a,
            mode=config.mode,
            evaluated=summary.evaluated,
            skipped=summary.skipped,
            scheme=config.scheme,
            variant=config.variant,
            reps=config.reps,
            seed=config.seed,
            elapsed_seconds=elapsed,
        )
    return summary


def cmd_compare(config: RunConfig, summary: DistributionSummary) -> List[Tuple[str, pd.DataFrame]]:
    """Compare a simulation against the published n=24 values for its DGP.

    When a Satterthwaite coverage row falls outside tolerance the run is
    repeated with the intercept-augmented leverage and compared as well.
    """
    label = f"DGP{config.scheme}.{config.variant}"
    if not has_reference(config.scheme, config.variant, summary.n, summary.n_a):
        logger.warning(f"No reference values for {label} at n={summary.n}, n_A={summary.n_a}")
        return []

    frame = compare_to_reference(summary, config.scheme, config.variant)
    results = [(label, frame)]
    satterthwaite = frame[frame["ci"] == CIMode.SATTERTHWAITE.value]
    if not config.leverage_intercept and not satterthwaite["within"].all():
        logger.warning(f"{label}: Satterthwaite coverage off; rerunning with the intercept in the leverage")
        rerun, _, _ = _simulate(config, leverage_intercept=True)
        results.append((f"{label} (leverage with intercept)",
                        compare_to_reference(rerun, config.scheme, config.variant)))
    return results


def cmd_dump_dgp(config: RunConfig) -> pd.DataFrame:
    """Generated population as (X1, X2, v, h, Y0, Y1)."""
    spec = scheme_spec(config.scheme, config.variant, n=config.n,
                       leverage_intercept=config.leverage_intercept)
    frame = dgp_frame(spec)
    if config.out:
        _write_frame(config.out, frame)
    return frame


def cmd_verify(config: RunConfig, echo=print) -> List[CheckResult]:
    """Run the identity suite; raises VerificationFailure on the first failing check."""
    return run_verification(sizes=config.sizes, fault=config.fault, echo=echo)


def cmd_runs(config: RunConfig) -> Union[int, List[SimulationRun]]:
    """List recorded runs, or clear them and return how many were removed."""
    if config.clear:
        return registry.clear_runs()
    return registry.list_runs(limit=config.limit)
