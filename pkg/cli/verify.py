"""Identity suite run by `main.py verify`.

Every check enumerates a small assignment space completely, so each
residual is a rounding error and not a sampling error.
"""
import logging
from dataclasses import dataclass, replace
from itertools import combinations
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from design.experiment import realize
from design.models import PotentialOutcomeTable
from dgp import build_table, scheme_spec
from estimators import (
    CONSTANT_NAMES,
    DISPLAY_NAMES,
    BiasConstants,
    ate_interacted,
    ate_noninteracted,
    bias_constants,
    estimate_all,
    rational_bias_constants,
)
from randomization import AssignmentSpace, enumerate_assignments
from utils.errors import VerificationFailure
from variance import DesignKind, design_matrix, fit_ols


logger = logging.getLogger(__name__)

CONSTANT_SIZES = ((24, 8), (12, 4), (8, 3))
MOMENT_SIZES = ((8, 3), (9, 4))


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)


def _indicators(n: int, n_a: int) -> np.ndarray:
    """0/1 matrix with one row per assignment, lexicographic order."""
    subsets = list(combinations(range(n), n_a))
    rows = np.zeros((len(subsets), n))
    for i, subset in enumerate(subsets):
        rows[i, list(subset)] = 1.0
    return rows


def _centered(rng: np.random.Generator, n: int) -> np.ndarray:
    x = rng.standard_normal(n)
    return x - x.mean()


def _relative(lhs: float, rhs: float, scale: float) -> float:
    return abs(lhs - rhs) / max(abs(rhs), scale)


def check_constants(sizes: Iterable[Tuple[int, int]] = CONSTANT_SIZES,
                    constants_fn: Callable[[int, int], BiasConstants] = bias_constants) -> List[CheckResult]:
    """Floating-point constants against exact rational evaluation."""
    results = []
    for n, n_a in sizes:
        computed = constants_fn(n, n_a)
        exact = rational_bias_constants(n, n_a)
        for name in CONSTANT_NAMES:
            value = getattr(computed, name)
            target = float(exact[name])
            residual = abs(value - target) / abs(target) if target != 0 else abs(value)
            results.append(CheckResult(f"constant {DISPLAY_NAMES[name]} at ({n}, {n_a})", residual, 1e-14))
    return results


def check_third_moments(sizes: Iterable[Tuple[int, int]] = MOMENT_SIZES, triples: int = 50,
                        seed: int = 0) -> List[CheckResult]:
    """Enumeration means of products of arm means, and rescaled arm third moments."""
    rng = np.random.default_rng(seed)
    results = []
    for n, n_a in sizes:
        n_b = n - n_a
        c = bias_constants(n, n_a)
        treated = _indicators(n, n_a)
        control = 1.0 - treated
        worst = {"same": 0.0, "cross": 0.0, "adj_a": 0.0, "adj_b": 0.0}
        for _ in range(triples):
            x, y, w = _centered(rng, n), _centered(rng, n), _centered(rng, n)
            pop = float(np.mean(x * y * w))
            scale = 1e-3 * float(np.mean(np.abs(x * y * w)))

            xa, ya, wa = treated @ x / n_a, treated @ y / n_a, treated @ w / n_a
            wb = control @ w / n_b
            worst["same"] = max(worst["same"], _relative(np.mean(xa * ya * wa), c.n_aaa * pop, scale))
            worst["cross"] = max(worst["cross"], _relative(np.mean(xa * ya * wb), c.n_aab * pop, scale))

            for arm, mask, size, adj in (("adj_a", treated, n_a, c.n_adj_a), ("adj_b", control, n_b, c.n_adj_b)):
                mx, my, mw = mask @ x / size, mask @ y / size, mask @ w / size
                m_xyw = mask @ (x * y * w) / size
                m_xy, m_xw, m_yw = mask @ (x * y) / size, mask @ (x * w) / size, mask @ (y * w) / size
                third = m_xyw - mx * m_yw - my * m_xw - mw * m_xy + 2 * mx * my * mw
                worst[arm] = max(worst[arm], _relative(adj * np.mean(third), pop, scale))

        results += [
            CheckResult(f"same-arm mean triple product at ({n}, {n_a})", worst["same"], 1e-10),
            CheckResult(f"cross-arm mean triple product at ({n}, {n_a})", worst["cross"], 1e-10),
            CheckResult(f"treated-arm third moment rescaling at ({n}, {n_a})", worst["adj_a"], 1e-10),
            CheckResult(f"control-arm third moment rescaling at ({n}, {n_a})", worst["adj_b"], 1e-10),
        ]
    return results


def random_table(rng: np.random.Generator, n: int, k: int = 2) -> PotentialOutcomeTable:
    """Skewed outcomes and covariates so every bias term is active."""
    z = rng.standard_normal((n, k))
    a = rng.exponential(size=n) + z[:, 0] ** 2
    b = rng.standard_normal(n) + z[:, 0] * z[:, -1]
    return PotentialOutcomeTable(a=a, b=b, z=z)


def unbiasedness_residuals(table: PotentialOutcomeTable, n_a: int,
                           constants: Optional[BiasConstants] = None) -> Tuple[float, float]:
    """|enumeration mean of debiased estimate - true ATE| for the NI and I estimators."""
    space = AssignmentSpace(table.n, n_a)
    constants = constants or bias_constants(table.n, n_a)
    ni, i = [], []
    for asn in enumerate_assignments(space):
        estimates = estimate_all(realize(table, asn), constants)
        ni.append(estimates.debiased_ni)
        i.append(estimates.debiased_i)
    return abs(np.mean(ni) - table.true_ate), abs(np.mean(i) - table.true_ate)


def _arm_sizes(n: int) -> List[int]:
    return sorted({max(3, n // 3), n // 2})


def check_unbiasedness(sizes: Sequence[int] = (8, 10, 12), seed: int = 0,
                       constants_fn: Callable[[int, int], BiasConstants] = bias_constants) -> List[CheckResult]:
    rng = np.random.default_rng(seed)
    results = []
    for n in sizes:
        table = random_table(rng, n)
        for n_a in _arm_sizes(n):
            ni, i = unbiasedness_residuals(table, n_a, constants_fn(n, n_a))
            results.append(CheckResult(f"debiased NI unbiased at ({n}, {n_a})", ni, 1e-9))
            results.append(CheckResult(f"debiased I unbiased at ({n}, {n_a})", i, 1e-9))

    for scheme in (1, 2):
        table = build_table(scheme_spec(scheme, 1, n=12))
        ni, i = unbiasedness_residuals(table, 4, constants_fn(12, 4))
        results.append(CheckResult(f"debiased NI unbiased on DGP{scheme}.1 at (12, 4)", ni, 1e-9))
        results.append(CheckResult(f"debiased I unbiased on DGP{scheme}.1 at (12, 4)", i, 1e-9))
    return results


def check_fwl(n: int = 10, n_a: int = 4, seed: int = 0, count: int = 20) -> List[CheckResult]:
    """Closed-form estimates against the treatment coefficient of the full regression."""
    rng = np.random.default_rng(seed)
    table = random_table(rng, n)
    worst_ni = worst_i = 0.0
    for index, asn in enumerate(enumerate_assignments(AssignmentSpace(n, n_a))):
        if index >= count:
            break
        data = realize(table, asn)
        fit_ni = fit_ols(data.y, design_matrix(data, DesignKind.NONINTERACTED))
        fit_i = fit_ols(data.y, design_matrix(data, DesignKind.INTERACTED))
        worst_ni = max(worst_ni, abs(ate_noninteracted(data) - fit_ni.coefficient))
        worst_i = max(worst_i, abs(ate_interacted(data) - fit_i.coefficient))
    return [
        CheckResult(f"non-interacted estimate equals regression coefficient at ({n}, {n_a})", worst_ni, 1e-9),
        CheckResult(f"interacted estimate equals regression coefficient at ({n}, {n_a})", worst_i, 1e-9),
    ]


def faulty_constants(name: str, factor: float = 1.01) -> Callable[[int, int], BiasConstants]:
    """Constants with one entry scaled; a negative control for the suite."""
    if name not in CONSTANT_NAMES:
        raise ValueError(f"unknown constant {name!r}; choose from {CONSTANT_NAMES}")

    def constants_fn(n: int, n_a: int) -> BiasConstants:
        good = bias_constants(n, n_a)
        return replace(good, **{name: getattr(good, name) * factor})

    return constants_fn


def run_verification(sizes: Sequence[int] = (8, 10, 12), seed: int = 0, fault: Optional[str] = None,
                     echo: Callable[[str], None] = print) -> List[CheckResult]:
    """Run every check, echo [OK]/[FAIL] lines, raise on the first failure."""
    constants_fn = faulty_constants(fault) if fault else bias_constants
    results: List[CheckResult] = []
    groups = [
        ("constants", lambda: check_constants(constants_fn=constants_fn)),
        ("third moments", lambda: check_third_moments(seed=seed)),
        ("unbiasedness", lambda: check_unbiasedness(sizes, seed=seed, constants_fn=constants_fn)),
        ("regression equivalence", lambda: check_fwl(seed=seed)),
    ]
    for title, run in groups:
        echo(f"\nChecking {title}...")
        for result in run():
            status = "[OK]" if result.passed else "[FAIL]"
            echo(f"{status} {result.name} (residual {result.residual:.2e})")
            results.append(result)

    failed = [r for r in results if not r.passed]
    echo(f"\n{len(results) - len(failed)}/{len(results)} checks passed")
    if failed:
        logger.error(f"Verification failed: {failed[0].name}")
        raise VerificationFailure(failed[0].name, failed[0].residual)
    return results
