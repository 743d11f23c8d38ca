"""Tests for symmetric inversion and quadratic forms."""
import numpy as np
import pytest

from linalg import SymMatrix, invert_spd, quadratic_form, quadratic_forms
from utils.errors import DimensionMismatch, SingularMatrix


class TestInvertSpd:

    def test_identity(self):
        inv = invert_spd(SymMatrix.identity(2))
        np.testing.assert_allclose(inv.entries, np.eye(2))

    def test_diagonal(self):
        inv = invert_spd([[2.0, 0.0], [0.0, 4.0]])
        np.testing.assert_allclose(inv.entries, [[0.5, 0.0], [0.0, 0.25]])

    def test_dense_two_by_two(self):
        m = np.array([[2.0, 1.0], [1.0, 2.0]])
        inv = invert_spd(m)
        np.testing.assert_allclose(inv.entries, [[2 / 3, -1 / 3], [-1 / 3, 2 / 3]], rtol=1e-14)
        np.testing.assert_allclose(inv @ m, np.eye(2), atol=1e-14)

    def test_random_spd_round_trip(self, rng):
        x = rng.standard_normal((30, 5))
        m = x.T @ x / 30
        inv = invert_spd(m)
        np.testing.assert_allclose(inv.entries @ m, np.eye(5), atol=1e-10)
        assert np.array_equal(inv.entries, inv.entries.T)

    def test_singular_raises(self):
        with pytest.raises(SingularMatrix) as err:
            invert_spd([[1.0, 1.0], [1.0, 1.0]], name="D_hat")
        assert err.value.matrix == "D_hat"

    def test_indefinite_raises(self):
        with pytest.raises(SingularMatrix):
            invert_spd([[1.0, 2.0], [2.0, 1.0]])

    def test_pseudo_inverse_of_rank_one(self):
        inv = invert_spd([[1.0, 1.0], [1.0, 1.0]], pseudo=True)
        np.testing.assert_allclose(inv.entries, np.full((2, 2), 0.25), atol=1e-14)

    def test_non_square_rejected(self):
        with pytest.raises(DimensionMismatch):
            SymMatrix(np.ones((2, 3)))


class TestQuadraticForm:

    def test_zero_vector(self):
        assert quadratic_form(np.zeros(2), [[3.0, 1.0], [1.0, 5.0]]) == 0.0

    def test_unit_vector(self):
        assert quadratic_form(np.array([1.0, 0.0]), SymMatrix.identity(2)) == 1.0

    def test_hand_expanded(self):
        m_inv = [[2 / 3, -1 / 3], [-1 / 3, 2 / 3]]
        assert quadratic_form(np.array([1.0, 1.0]), m_inv) == pytest.approx(2 / 3, rel=1e-15)

    def test_row_wise_matches_scalar(self, rng):
        rows = rng.standard_normal((6, 3))
        m = SymMatrix(np.diag([1.0, 2.0, 3.0]))
        expected = [quadratic_form(r, m) for r in rows]
        np.testing.assert_allclose(quadratic_forms(rows, m), expected, rtol=1e-14)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            quadratic_form(np.ones(3), SymMatrix.identity(2))
