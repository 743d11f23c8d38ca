"""Tests for the finite-population bias constants."""
from fractions import Fraction

import pytest

from estimators import CONSTANT_NAMES, bias_constants, rational_bias_constants
from utils.errors import ArmTooSmall


SIZES = [(24, 8), (12, 4), (8, 3), (9, 4), (48, 16), (30, 17)]


@pytest.mark.parametrize("n, n_a", SIZES)
def test_matches_rational_evaluation(n, n_a):
    computed = bias_constants(n, n_a).as_dict()
    exact = rational_bias_constants(n, n_a)
    for name in CONSTANT_NAMES:
        target = float(exact[name])
        if target == 0:
            assert computed[name] == 0.0
        else:
            assert computed[name] == pytest.approx(target, rel=1e-14), name


def test_values_at_twenty_four_and_eight():
    c = bias_constants(24, 8)
    assert c.n_aaa == pytest.approx(1 / 253, rel=1e-15)
    assert c.n_bbb == pytest.approx(-1 / 2024, rel=1e-15)
    assert c.n_aab == pytest.approx(-1 / 506, rel=1e-15)
    assert c.n_adj_a == pytest.approx(253 / 189, rel=1e-15)
    assert c.c_a_ni == pytest.approx(1 / 378, rel=1e-15)
    assert c.c_b_ni == pytest.approx(-1 / 945, rel=1e-15)
    assert c.c_a_i == pytest.approx(1 / 189, rel=1e-15)
    assert c.c_b_i == pytest.approx(-1 / 1890, rel=1e-15)


def test_same_arm_triple_by_hand():
    exact = rational_bias_constants(6, 3)
    n, k = Fraction(6), Fraction(3)
    by_hand = (n / k ** 3) * (k / n - 3 * k * (k - 1) / (n * (n - 1))
                              + 2 * k * (k - 1) * (k - 2) / (n * (n - 1) * (n - 2)))
    assert exact["n_aaa"] == by_hand == 0


def test_balanced_arms_zero_third_moment_terms():
    c = bias_constants(10, 5)
    assert c.n_aaa == c.n_bbb == c.n_aab == 0.0
    assert c.c_a_ni == c.c_b_ni == c.c_a_i == c.c_b_i == 0.0


@pytest.mark.parametrize("n, n_a", SIZES)
def test_cross_arm_follows_from_centering(n, n_a):
    exact = rational_bias_constants(n, n_a)
    assert exact["n_aab"] == -Fraction(n_a, n - n_a) * exact["n_aaa"]


@pytest.mark.parametrize("n, n_a", [(12, 4), (24, 8), (30, 10)])
def test_shrinks_at_least_like_one_over_n(n, n_a):
    small = bias_constants(n, n_a)
    large = bias_constants(2 * n, 2 * n_a)
    ratio = (small.n_aaa * small.n_adj_a) / (large.n_aaa * large.n_adj_a)
    assert ratio >= 1.5


def test_printed_control_constant_differs():
    c = bias_constants(24, 8)
    assert c.c_b_ni_printed != pytest.approx(c.c_b_ni)
    exact = rational_bias_constants(24, 8)
    assert c.c_b_ni_printed == pytest.approx(float(exact["c_b_ni_printed"]), rel=1e-14)


@pytest.mark.parametrize("n, n_a", [(8, 2), (8, 6), (5, 2)])
def test_small_arm_rejected(n, n_a):
    with pytest.raises(ArmTooSmall):
        bias_constants(n, n_a)
