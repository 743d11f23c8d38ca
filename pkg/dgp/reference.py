"""Published n=24 results for the simulation schemes and a comparison against them.

Values are three-decimal (a few two-decimal) figures for the full C(24, 8)
enumeration, keyed by DGP. Coverage rows are keyed by (estimator, flavor, ci).
"""
import logging
from typing import Dict, List, Tuple

import pandas as pd

from variance import CIMode, Flavor


logger = logging.getLogger(__name__)

REFERENCE_N = 24
REFERENCE_TREATED = 8

POINT_TOLERANCE = 5e-4
T_TOLERANCE = 0.002
SATTERTHWAITE_TOLERANCE = 0.015
TWO_DECIMAL_TOLERANCE = 0.005

_ORDER = ("unadjusted", "ols_ni", "ols_i", "debiased_ni", "debiased_i")
_DEBIASED = ("debiased_ni", "debiased_i")

_HC2_T = (Flavor.HC2, CIMode.T)
_HC2_SATT = (Flavor.HC2, CIMode.SATTERTHWAITE)
_BC_T = (Flavor.BC_HC2, CIMode.T)
_BC_SATT = (Flavor.BC_HC2, CIMode.SATTERTHWAITE)


def _block(bias, sd, rmse, hc2_t, hc2_satt, bc_t, bc_satt, two_decimal=()):
    stats = {name: {"bias": b, "sd": s, "rmse": r} for name, b, s, r in zip(_ORDER, bias, sd, rmse)}
    coverage = {}
    for key, values, names in ((_HC2_T, hc2_t, _ORDER), (_HC2_SATT, hc2_satt, _ORDER),
                               (_BC_T, bc_t, _DEBIASED), (_BC_SATT, bc_satt, _DEBIASED)):
        for name, value in zip(names, values):
            coverage[(name, *key)] = value
    return {"stats": stats, "coverage": coverage, "two_decimal": set(two_decimal)}


REFERENCE: Dict[Tuple[int, int], dict] = {
    (1, 1): _block(
        bias=(0.000, -0.044, -0.171, 0.000, 0.000),
        sd=(0.577, 0.569, 0.734, 0.558, 0.570),
        rmse=(0.577, 0.571, 0.754, 0.558, 0.570),
        hc2_t=(0.961, 0.957, 0.919, 0.960, 0.953),
        hc2_satt=(0.965, 0.964, 0.949, 0.966, 0.970),
        bc_t=(0.961, 0.957),
        bc_satt=(0.967, 0.973),
    ),
    (1, 2): _block(
        bias=(0.000, -0.046, -0.097, 0.000, 0.000),
        sd=(0.144, 0.220, 0.275, 0.205, 0.182),
        rmse=(0.144, 0.225, 0.292, 0.205, 0.182),
        hc2_t=(1.000, 0.999, 0.982, 1.000, 0.999),
        hc2_satt=(1.000, 1.000, 0.994, 1.000, 1.000),
        bc_t=(1.000, 1.000),
        bc_satt=(1.000, 1.000),
    ),
    (1, 3): _block(
        bias=(0.000, 0.002, -0.074, 0.000, 0.000),
        sd=(0.433, 0.417, 0.483, 0.400, 0.408),
        rmse=(0.433, 0.417, 0.489, 0.400, 0.408),
        hc2_t=(0.940, 0.938, 0.916, 0.946, 0.948),
        hc2_satt=(0.947, 0.949, 0.950, 0.956, 0.970),
        bc_t=(0.947, 0.950),
        bc_satt=(0.956, 0.971),
    ),
    (2, 1): _block(
        bias=(0.000, -0.237, 0.028, 0.000, 0.000),
        sd=(0.577, 0.344, 0.283, 0.459, 0.439),
        rmse=(0.577, 0.418, 0.284, 0.459, 0.439),
        hc2_t=(0.910, 0.913, 0.757, 0.923, 0.470),
        hc2_satt=(0.915, 0.920, 0.837, 0.928, 0.548),
        bc_t=(0.923, 0.876),
        bc_satt=(0.928, 0.930),
    ),
    (2, 2): _block(
        bias=(0.000, -0.237, 0.015, 0.000, 0.000),
        sd=(0.144, 0.326, 0.132, 0.314, 0.225),
        rmse=(0.144, 0.403, 0.133, 0.314, 0.225),
        hc2_t=(1.00, 0.93, 0.93, 0.967, 0.614),
        hc2_satt=(1.00, 0.935, 0.991, 0.969, 0.724),
        bc_t=(0.965, 0.967),
        bc_satt=(0.968, 0.996),
        two_decimal=[("unadjusted", *_HC2_T), ("ols_ni", *_HC2_T), ("ols_i", *_HC2_T),
                     ("unadjusted", *_HC2_SATT)],
    ),
    (2, 3): _block(
        bias=(0.000, 0.000, 0.013, 0.000, 0.000),
        sd=(0.433, 0.097, 0.163, 0.195, 0.239),
        rmse=(0.433, 0.097, 0.164, 0.195, 0.239),
        hc2_t=(0.93, 0.97, 0.85, 0.654, 0.570),
        hc2_satt=(0.942, 0.983, 0.947, 0.683, 0.678),
        bc_t=(0.809, 0.896),
        bc_satt=(0.850, 0.944),
        two_decimal=[("unadjusted", *_HC2_T), ("ols_ni", *_HC2_T), ("ols_i", *_HC2_T)],
    ),
    (3, 1): _block(
        bias=(0.000, -0.144, -0.004, 0.000, 0.000),
        sd=(0.577, 0.362, 0.281, 0.433, 0.387),
        rmse=(0.577, 0.390, 0.281, 0.433, 0.387),
        hc2_t=(0.943, 0.949, 0.843, 0.959, 0.712),
        hc2_satt=(0.948, 0.959, 0.917, 0.965, 0.810),
        bc_t=(0.960, 0.876),
        bc_satt=(0.966, 0.936),
    ),
    (3, 2): _block(
        bias=(0.000, 0.144, 0.003, 0.000, 0.000),
        sd=(0.144, 0.342, 0.129, 0.316, 0.198),
        rmse=(0.144, 0.371, 0.129, 0.316, 0.198),
        hc2_t=(1.000, 0.963, 0.927, 0.983, 0.804),
        hc2_satt=(1.000, 0.967, 0.980, 0.985, 0.906),
        bc_t=(0.981, 0.959),
        bc_satt=(0.983, 0.992),
    ),
    (3, 3): _block(
        bias=(0.000, 0.000, -0.001, 0.000, 0.000),
        sd=(0.433, 0.109, 0.164, 0.168, 0.210),
        rmse=(0.433, 0.109, 0.164, 0.168, 0.210),
        hc2_t=(0.941, 0.942, 0.857, 0.817, 0.750),
        hc2_satt=(0.948, 0.954, 0.936, 0.841, 0.859),
        bc_t=(0.870, 0.874),
        bc_satt=(0.896, 0.939),
    ),
    (4, 1): _block(
        bias=(0.000, -0.060, -0.042, 0.000, 0.000),
        sd=(0.577, 0.438, 0.692, 0.524, 0.570),
        rmse=(0.577, 0.442, 0.693, 0.524, 0.570),
        hc2_t=(0.862, 0.849, 0.801, 0.832, 0.803),
        hc2_satt=(0.872, 0.858, 0.856, 0.843, 0.860),
        bc_t=(0.836, 0.841),
        bc_satt=(0.847, 0.890),
    ),
    (4, 2): _block(
        bias=(0.000, 0.061, 0.028, 0.000, 0.000),
        sd=(0.144, 0.325, 0.317, 0.303, 0.256),
        rmse=(0.144, 0.331, 0.318, 0.303, 0.256),
        hc2_t=(1.000, 0.933, 0.907, 0.954, 0.930),
        hc2_satt=(1.000, 0.940, 0.974, 0.960, 0.991),
        bc_t=(0.954, 0.952),
        bc_satt=(0.961, 0.994),
    ),
    (4, 3): _block(
        bias=(0.000, 0.001, -0.014, 0.000, 0.000),
        sd=(0.433, 0.272, 0.405, 0.329, 0.355),
        rmse=(0.433, 0.272, 0.405, 0.329, 0.355),
        hc2_t=(0.952, 0.948, 0.828, 0.895, 0.851),
        hc2_satt=(0.961, 0.960, 0.921, 0.916, 0.926),
        bc_t=(0.907, 0.868),
        bc_satt=(0.927, 0.929),
    ),
}

COMPARISON_COLUMNS = ["quantity", "estimator", "flavor", "ci", "reference", "observed",
                      "difference", "tolerance", "within"]


def has_reference(scheme: int, variant: int, n: int, n_a: int) -> bool:
    return (scheme, variant) in REFERENCE and (n, n_a) == (REFERENCE_N, REFERENCE_TREATED)


def compare_to_reference(summary, scheme: int, variant: int) -> pd.DataFrame:
    """Observed against published values for every row the summary carries.

    Coverage rows missing from the summary (flavor or CI mode not requested)
    are left out.
    """
    if (scheme, variant) not in REFERENCE:
        raise KeyError(f"no reference values for DGP{scheme}.{variant}")
    if (summary.n, summary.n_a) != (REFERENCE_N, REFERENCE_TREATED):
        logger.warning(f"Reference values are for n={REFERENCE_N}, n_A={REFERENCE_TREATED}; "
                       f"comparing a run with n={summary.n}, n_A={summary.n_a}")
    block = REFERENCE[(scheme, variant)]
    rows: List[dict] = []

    for name, stats in block["stats"].items():
        observed = summary.estimators[name]
        for quantity, reference in stats.items():
            value = getattr(observed, quantity)
            rows.append(_row(quantity, name, "", "", reference, value, POINT_TOLERANCE))

    for (name, flavor, ci), reference in block["coverage"].items():
        try:
            value = summary.interval(name, flavor, ci).coverage
        except KeyError:
            continue
        if (name, flavor, ci) in block["two_decimal"]:
            tolerance = TWO_DECIMAL_TOLERANCE
        elif ci == CIMode.SATTERTHWAITE:
            tolerance = SATTERTHWAITE_TOLERANCE
        else:
            tolerance = T_TOLERANCE
        rows.append(_row("coverage", name, flavor.value, ci.value, reference, value, tolerance))

    frame = pd.DataFrame(rows, columns=COMPARISON_COLUMNS)
    misses = int((~frame["within"]).sum())
    if misses:
        logger.warning(f"DGP{scheme}.{variant}: {misses} of {len(frame)} rows outside tolerance")
    else:
        logger.info(f"DGP{scheme}.{variant}: all {len(frame)} rows within tolerance")
    return frame


def _row(quantity, name, flavor, ci, reference, observed, tolerance) -> dict:
    difference = observed - reference
    return {
        "quantity": quantity,
        "estimator": name,
        "flavor": flavor,
        "ci": ci,
        "reference": reference,
        "observed": observed,
        "difference": difference,
        "tolerance": tolerance,
        # float slack at the boundary
        "within": bool(abs(difference) <= tolerance + 1e-12),
    }
