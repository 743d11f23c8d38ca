"""Exact and Monte Carlo randomization distributions of the estimators."""
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from config import settings, worker_count
from design.experiment import realize
from design.models import Assignment, PotentialOutcomeTable
from estimators import ESTIMATOR_NAMES, BiasConstants, bias_constants, estimate_all
from randomization.space import (
    MAX_RANKED_TOTAL,
    AssignmentSpace,
    enumerate_assignments,
    sample,
    sample_ranks,
    unrank,
)
from randomization.summary import (
    FIT_OF_ESTIMATOR,
    DistributionSummary,
    RecordLayout,
    interval_half_widths,
    summarize,
)
from utils.errors import AssignmentError, BudgetExceeded, DataError, ModelError
from variance import (
    CIMode,
    DesignKind,
    Flavor,
    StudentDf,
    bc_residuals,
    design_matrix,
    fit_ols,
    hc_variance,
    satterthwaite_df,
)


logger = logging.getLogger(__name__)


@dataclass
class ChunkResult:
    """Records of one chunk in rank (or draw) order."""
    ranks: np.ndarray
    rows: np.ndarray
    skipped: int = 0
    skipped_ranks: List[int] = field(default_factory=list)


class AssignmentEvaluator:
    """Evaluates every estimator and standard error for single assignments."""

    def __init__(self, table: PotentialOutcomeTable, space: AssignmentSpace,
                 flavors: Sequence[Flavor], rel_tol: float = None, skip_singular: bool = False):
        if space.n != table.n:
            raise DataError(f"space is over {space.n} units, table has {table.n}")
        self.table = table
        self.space = space
        self.layout = RecordLayout(tuple(Flavor(f) for f in flavors))
        self.rel_tol = settings.REL_TOL if rel_tol is None else rel_tol
        self.skip_singular = skip_singular
        self.constants: BiasConstants = bias_constants(space.n, space.n_a)
        self._index = self.layout.index()

    def evaluate(self, asn: Assignment) -> np.ndarray:
        """One record row for one assignment."""
        data = realize(self.table, asn)
        estimates = estimate_all(data, self.constants, rel_tol=self.rel_tol).as_dict()
        fits = {
            kind: fit_ols(data.y, design_matrix(data, kind), rel_tol=self.rel_tol)
            for kind in DesignKind
        }

        row = np.empty(len(self._index))
        for name in ESTIMATOR_NAMES:
            row[self._index[f"est:{name}"]] = estimates[name]
        for name, flavor in self.layout.series:
            ctx = fits[FIT_OF_ESTIMATOR[name]]
            if flavor.bias_corrected:
                ctx = bc_residuals(ctx, estimates[name])
            row[self._index[f"se:{name}:{flavor.value}"]] = math.sqrt(hc_variance(ctx, flavor))
        for kind, ctx in fits.items():
            for base in self.layout.bases:
                row[self._index[f"df:{kind.value}:{base.value}"]] = satterthwaite_df(ctx, base)
        return row

    def _evaluate_many(self, assignments, ranks) -> ChunkResult:
        rows, kept_ranks, skipped_ranks = [], [], []
        for asn, rank in zip(assignments, ranks):
            try:
                rows.append(self.evaluate(asn))
                kept_ranks.append(rank)
            except ModelError as e:
                where = None if rank < 0 else int(rank)
                if not self.skip_singular:
                    raise AssignmentError(where, e) from e
                logger.warning(f"Skipping assignment {where if where is not None else asn.treated}: {e}")
                skipped_ranks.append(int(rank))
        width = len(self._index)
        return ChunkResult(
            ranks=np.array(kept_ranks, dtype=np.int64),
            rows=np.array(rows).reshape(-1, width),
            skipped=len(skipped_ranks),
            skipped_ranks=skipped_ranks,
        )

    def evaluate_ranks(self, start: int, stop: int) -> ChunkResult:
        """Evaluate the lexicographic rank range [start, stop)."""
        return self._evaluate_many(enumerate_assignments(self.space, start, stop), range(start, stop))

    def evaluate_sample(self, seed: np.random.SeedSequence, count: int) -> ChunkResult:
        """Evaluate count uniform draws generated from seed."""
        if self.space.total <= MAX_RANKED_TOTAL:
            ranks = sample_ranks(self.space, seed, count)
            return self._evaluate_many((unrank(self.space, r) for r in ranks), ranks)
        return self._evaluate_many(sample(self.space, seed, count), [-1] * count)


_worker_evaluator: Optional[AssignmentEvaluator] = None


def _init_worker(evaluator: AssignmentEvaluator):
    global _worker_evaluator
    _worker_evaluator = evaluator


def _call_worker(method: str, *args) -> ChunkResult:
    return getattr(_worker_evaluator, method)(*args)


def _merge(chunks: List[ChunkResult], width: int) -> ChunkResult:
    ranks = np.concatenate([c.ranks for c in chunks]) if chunks else np.empty(0, dtype=np.int64)
    rows = np.concatenate([c.rows for c in chunks]) if chunks else np.empty((0, width))
    skipped_ranks = [r for c in chunks for r in c.skipped_ranks]
    return ChunkResult(ranks=ranks, rows=rows, skipped=sum(c.skipped for c in chunks),
                       skipped_ranks=skipped_ranks)


class RandomizationEngine:
    """Runs evaluators over an assignment space, serially or on a process pool.

    Call from one thread at a time; the records of the most recent run are
    kept on the instance for dumping.
    """

    def __init__(self, flavors: Sequence[Flavor] = (Flavor.HC2, Flavor.BC_HC2),
                 ci_modes: Sequence[CIMode] = tuple(CIMode), threads: int = None,
                 chunk_size: int = None, budget: int = None, skip_singular: bool = False,
                 level: float = None, rel_tol: float = None, t_rule: StudentDf = None):
        self.flavors = tuple(Flavor(f) for f in flavors)
        self.ci_modes = tuple(CIMode(m) for m in ci_modes)
        self.workers = worker_count(threads)
        self.chunk_size = chunk_size or settings.CHUNK_SIZE
        self.budget = settings.BUDGET if budget is None else budget
        self.skip_singular = skip_singular
        self.level = settings.CONFIDENCE_LEVEL if level is None else level
        self.rel_tol = rel_tol
        self.t_rule = StudentDf(settings.T_DF if t_rule is None else t_rule)
        self.last_records: Optional[ChunkResult] = None
        self._last_context = None

    def _run(self, evaluator: AssignmentEvaluator, method: str, tasks) -> ChunkResult:
        width = len(evaluator.layout.columns)
        if self.workers == 1 or len(tasks) == 1:
            results = []
            for i, args in enumerate(tasks):
                results.append(getattr(evaluator, method)(*args))
                logger.debug(f"Chunk {i + 1}/{len(tasks)} done")
            return _merge(results, width)

        with ProcessPoolExecutor(max_workers=self.workers, initializer=_init_worker,
                                 initargs=(evaluator,)) as pool:
            futures = [pool.submit(_call_worker, method, *args) for args in tasks]
            results = []
            for i, future in enumerate(futures):
                results.append(future.result())
                logger.debug(f"Chunk {i + 1}/{len(tasks)} done")
        return _merge(results, width)

    def exact_distribution(self, table: PotentialOutcomeTable,
                           space: AssignmentSpace) -> DistributionSummary:
        """Evaluate every assignment of the space."""
        if space.total > self.budget:
            raise BudgetExceeded(
                f"C({space.n}, {space.n_a}) = {space.total} assignments exceeds the budget of "
                f"{self.budget}; raise --budget or use --mode mc"
            )
        evaluator = AssignmentEvaluator(table, space, self.flavors, self.rel_tol, self.skip_singular)
        tasks = [(start, min(start + self.chunk_size, space.total))
                 for start in range(0, space.total, self.chunk_size)]
        logger.info(f"Enumerating {space.total} assignments in {len(tasks)} chunk(s) "
                    f"on {min(self.workers, len(tasks))} worker(s)")

        started = time.perf_counter()
        records = self._run(evaluator, "evaluate_ranks", tasks)
        logger.info(f"Evaluated {len(records.ranks)} assignments in {time.perf_counter() - started:.1f}s")
        if records.skipped:
            logger.warning(f"Excluded {records.skipped} singular assignment(s)")
        return self._finish(table, space, evaluator, records, mode="exact")

    def monte_carlo_distribution(self, table: PotentialOutcomeTable, space: AssignmentSpace,
                                 seed: int, reps: int) -> DistributionSummary:
        """Evaluate reps independent uniform draws; results depend only on seed and reps."""
        if reps < 2:
            raise DataError(f"Monte Carlo needs at least 2 reps, got {reps}")
        evaluator = AssignmentEvaluator(table, space, self.flavors, self.rel_tol, self.skip_singular)
        counts = [min(self.chunk_size, reps - start) for start in range(0, reps, self.chunk_size)]
        children = np.random.SeedSequence(seed).spawn(len(counts))
        tasks = list(zip(children, counts))
        logger.info(f"Sampling {reps} assignments in {len(tasks)} chunk(s) (seed={seed})")

        started = time.perf_counter()
        records = self._run(evaluator, "evaluate_sample", tasks)
        logger.info(f"Evaluated {len(records.ranks)} draws in {time.perf_counter() - started:.1f}s")
        return self._finish(table, space, evaluator, records, mode="mc", seed=seed, reps=reps)

    def _finish(self, table, space, evaluator, records, mode, seed=None, reps=None) -> DistributionSummary:
        self.last_records = records
        self._last_context = (evaluator.layout, table, space)
        return summarize(
            records.rows,
            evaluator.layout,
            true_ate=table.true_ate,
            n=space.n,
            n_a=space.n_a,
            k=table.k,
            mode=mode,
            total_assignments=space.total,
            ci_modes=self.ci_modes,
            level=self.level,
            skipped=records.skipped,
            seed=seed,
            reps=reps,
            monte_carlo=(mode == "mc"),
            t_rule=self.t_rule,
        )

    def records_frame(self, flavor: Flavor = None, ci: CIMode = None) -> pd.DataFrame:
        """Per-assignment estimates with interval bounds for one flavor and CI mode."""
        if self.last_records is None:
            raise DataError("no distribution has been computed yet")
        layout, table, space = self._last_context
        flavor = Flavor(flavor) if flavor is not None else self.flavors[0]
        ci = CIMode(ci) if ci is not None else self.ci_modes[0]
        rows = self.last_records.rows
        idx = layout.index()

        frame = pd.DataFrame({"rank": self.last_records.ranks})
        for name in ESTIMATOR_NAMES:
            frame[name] = rows[:, idx[f"est:{name}"]]
        for name, series_flavor in layout.series:
            if series_flavor != flavor:
                continue
            half = interval_half_widths(rows, layout, name, flavor, ci, space.n, table.k, self.level,
                                        self.t_rule)
            frame[f"{name}_lower"] = frame[name] - half
            frame[f"{name}_upper"] = frame[name] + half
        return frame


def evaluate_assignment(table: PotentialOutcomeTable, asn: Assignment,
                        flavors: Sequence[Flavor] = (Flavor.HC2, Flavor.BC_HC2)) -> dict:
    """All estimates, standard errors and Satterthwaite df of one assignment, keyed by column."""
    evaluator = AssignmentEvaluator(table, AssignmentSpace(asn.n, asn.n_a), flavors)
    return dict(zip(evaluator.layout.columns, evaluator.evaluate(asn).tolist()))


def exact_distribution(table: PotentialOutcomeTable, space: AssignmentSpace = None,
                       **engine_options) -> DistributionSummary:
    space = space or AssignmentSpace(table.n, table.n // 3)
    return RandomizationEngine(**engine_options).exact_distribution(table, space)


def monte_carlo_distribution(table: PotentialOutcomeTable, space: AssignmentSpace = None,
                             seed: int = None, reps: int = None, **engine_options) -> DistributionSummary:
    space = space or AssignmentSpace(table.n, table.n // 3)
    seed = settings.SEED if seed is None else seed
    reps = settings.MC_REPS if reps is None else reps
    return RandomizationEngine(**engine_options).monte_carlo_distribution(table, space, seed, reps)
