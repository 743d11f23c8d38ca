"""Finite-population constants of the bias estimators.

The third moments of arm means under complete randomization are multiples
of the population third moment, and arm third moments are unbiased for it
after rescaling. These multipliers depend only on (n, n_A).
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict

from utils.errors import ArmTooSmall


@dataclass(frozen=True)
class BiasConstants:
    n: int
    n_a: int
    n_b: int
    n_aaa: float
    n_bbb: float
    n_aab: float
    n_adj_a: float
    n_adj_b: float
    c_a_ni: float
    c_b_ni: float
    c_a_i: float
    c_b_i: float
    # C_{B,NI} composed with N_Adj,A and the N_AAB lacking its factor 2
    c_b_ni_printed: float

    def as_dict(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in CONSTANT_NAMES}


CONSTANT_NAMES = (
    "n_aaa", "n_bbb", "n_aab", "n_adj_a", "n_adj_b",
    "c_a_ni", "c_b_ni", "c_a_i", "c_b_i",
)

DISPLAY_NAMES = {
    "n_aaa": "N_AAA",
    "n_bbb": "N_BBB",
    "n_aab": "N_AAB",
    "n_adj_a": "N_Adj,A",
    "n_adj_b": "N_Adj,B",
    "c_a_ni": "C_{A,NI}",
    "c_b_ni": "C_{B,NI}",
    "c_a_i": "C_{A,I}",
    "c_b_i": "C_{B,I}",
}


def _check_sizes(n: int, n_a: int) -> int:
    n_b = n - n_a
    if n_a < 3 or n_b < 3:
        raise ArmTooSmall(f"bias correction needs at least 3 units per arm; got n_A={n_a}, n_B={n_b}")
    return n_b


def bias_constants(n: int, n_a: int) -> BiasConstants:
    """Evaluate the constants in floating point.

    Each constant is reduced by hand to one ratio of integer products, so
    Python's exact integer arithmetic carries everything up to a single
    correctly rounded division.
    """
    n, n_a = int(n), int(n_a)
    n_b = _check_sizes(n, n_a)
    m1, m2 = n - 1, n - 2

    return BiasConstants(
        n=n,
        n_a=n_a,
        n_b=n_b,
        n_aaa=n_b * (n_b - n_a) / (n_a * n_a * m1 * m2),
        n_bbb=n_a * (n_a - n_b) / (n_b * n_b * m1 * m2),
        n_aab=(n_a - n_b) / (n_a * m1 * m2),
        n_adj_a=m1 * m2 * n_a * n_a / ((n_a - 1) * (n_a - 2) * n * n),
        n_adj_b=m1 * m2 * n_b * n_b / ((n_b - 1) * (n_b - 2) * n * n),
        c_a_ni=n_a * (n_b - n_a) / ((n_a - 1) * (n_a - 2) * n * n),
        c_b_ni=n_b * (n_a - n_b) / ((n_b - 1) * (n_b - 2) * n * n),
        c_a_i=n_b * (n_b - n_a) / ((n_a - 1) * (n_a - 2) * n * n),
        c_b_i=n_a * (n_a - n_b) / ((n_b - 1) * (n_b - 2) * n * n),
        c_b_ni_printed=-(n_b - 1) * n_a * n_a / (n_b * (n_a - 1) * (n_a - 2) * n * n),
    )


def rational_bias_constants(n: int, n_a: int) -> Dict[str, Fraction]:
    """Exact rational evaluation of the unsimplified closed forms."""
    n_b = _check_sizes(int(n), int(n_a))
    n, na, nb = Fraction(n), Fraction(n_a), Fraction(n_b)

    def triple_same(k):
        return (n / k ** 3) * (
            k / n
            - 3 * k * (k - 1) / (n * (n - 1))
            + 2 * k * (k - 1) * (k - 2) / (n * (n - 1) * (n - 2))
        )

    def adjustment(k):
        return n * (n - 1) * (n - 2) / ((k - 1) * (k - 2) * k) * k ** 3 / n ** 3

    n_aaa = triple_same(na)
    n_bbb = triple_same(nb)
    n_aab = (n / (na ** 2 * nb)) * (
        -na * nb / (n * (n - 1))
        + 2 * na * (na - 1) * nb / (n * (n - 1) * (n - 2))
    )
    n_aab_printed = (n / (na ** 2 * nb)) * (
        -na * nb / (n * (n - 1))
        + na * (na - 1) * nb / (n * (n - 1) * (n - 2))
    )
    n_adj_a = adjustment(na)
    n_adj_b = adjustment(nb)

    return {
        "n_aaa": n_aaa,
        "n_bbb": n_bbb,
        "n_aab": n_aab,
        "n_adj_a": n_adj_a,
        "n_adj_b": n_adj_b,
        "c_a_ni": na / nb * n_aaa * n_adj_a,
        "c_b_ni": na / nb * n_aab * n_adj_b,
        "c_a_i": n_aaa * n_adj_a,
        "c_b_i": n_bbb * n_adj_b,
        "c_b_ni_printed": na / nb * n_aab_printed * n_adj_a,
    }
