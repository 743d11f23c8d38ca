"""Tests for assignment spaces and the randomization engine."""
import math
from collections import Counter

import numpy as np
import pytest

from design import PotentialOutcomeTable
from randomization import (
    AssignmentSpace,
    RandomizationEngine,
    enumerate_assignments,
    evaluate_assignment,
    lower_median,
    sample,
    unrank,
)
from utils.errors import AssignmentError, BudgetExceeded, DataError, IndexOutOfRange, Overflow
from variance import CIMode, Flavor


class TestAssignmentSpace:

    def test_lexicographic_order(self):
        subsets = [asn.treated for asn in enumerate_assignments(AssignmentSpace(4, 2))]
        assert subsets == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]

    def test_total(self):
        assert AssignmentSpace(24, 8).total == 735471

    def test_unrank_endpoints(self):
        space = AssignmentSpace(4, 2)
        assert unrank(space, 0).treated == (0, 1)
        assert unrank(space, 5).treated == (2, 3)

    def test_unrank_agrees_with_enumeration(self):
        space = AssignmentSpace(9, 4)
        listed = [asn.treated for asn in enumerate_assignments(space)]
        assert [unrank(space, r).treated for r in range(space.total)] == listed

    def test_rank_range(self):
        space = AssignmentSpace(8, 3)
        listed = [asn.treated for asn in enumerate_assignments(space)]
        assert [asn.treated for asn in enumerate_assignments(space, 13, 29)] == listed[13:29]
        assert [asn.treated for asn in enumerate_assignments(space, 50, 100)] == listed[50:]

    def test_rank_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            unrank(AssignmentSpace(4, 2), 6)

    def test_small_arm_rejected(self):
        with pytest.raises(DataError):
            AssignmentSpace(6, 1)

    def test_huge_space_cannot_be_enumerated(self):
        with pytest.raises(Overflow):
            next(enumerate_assignments(AssignmentSpace(157, 58)))


class TestSampling:

    def test_reproducible(self):
        space = AssignmentSpace(10, 4)
        first = [asn.treated for asn in sample(space, 7, 3)]
        second = [asn.treated for asn in sample(space, 7, 3)]
        assert first == second

    def test_uniform_frequencies(self):
        draws = 6000
        counts = Counter(asn.treated for asn in sample(AssignmentSpace(4, 2), 2024, draws))
        sigma = math.sqrt(draws * (1 / 6) * (5 / 6))
        assert len(counts) == 6
        for count in counts.values():
            assert abs(count - draws / 6) < 4 * sigma

    def test_huge_space(self):
        (asn,) = sample(AssignmentSpace(157, 58), 1, 1)
        assert asn.n_a == 58
        assert asn.n == 157


@pytest.fixture
def engine():
    return RandomizationEngine(flavors=(Flavor.HC2, Flavor.BC_HC2), threads=1, chunk_size=16)


class TestExactDistribution:

    def test_serial_and_parallel_agree(self, small_table):
        space = AssignmentSpace(8, 4)
        serial = RandomizationEngine(threads=1, chunk_size=16).exact_distribution(small_table, space)
        parallel = RandomizationEngine(threads=2, chunk_size=16).exact_distribution(small_table, space)
        assert serial.model_dump() == parallel.model_dump()

    def test_chunk_size_does_not_matter(self, small_table):
        space = AssignmentSpace(8, 4)
        coarse = RandomizationEngine(threads=1, chunk_size=70).exact_distribution(small_table, space)
        fine = RandomizationEngine(threads=1, chunk_size=9).exact_distribution(small_table, space)
        assert coarse.model_dump() == fine.model_dump()

    def test_counts_and_records(self, small_table, engine):
        summary = engine.exact_distribution(small_table, AssignmentSpace(8, 4))
        assert summary.evaluated == summary.total_assignments == 70
        assert summary.mode == "exact"
        frame = engine.records_frame()
        assert list(frame["rank"]) == list(range(70))
        assert (frame["debiased_ni_lower"] <= frame["debiased_ni"]).all()

    def test_rmse_decomposition(self, small_table, engine):
        summary = engine.exact_distribution(small_table, AssignmentSpace(8, 4))
        for stats in summary.estimators.values():
            assert stats.rmse ** 2 == pytest.approx(stats.bias ** 2 + stats.sd ** 2, rel=1e-10)

    def test_debiased_estimators_unbiased(self, small_table, engine):
        summary = engine.exact_distribution(small_table, AssignmentSpace(8, 4))
        assert summary.estimators["debiased_ni"].bias == pytest.approx(0.0, abs=1e-10)
        assert summary.estimators["debiased_i"].bias == pytest.approx(0.0, abs=1e-10)
        assert summary.estimators["unadjusted"].bias == pytest.approx(0.0, abs=1e-12)

    def test_interval_series(self, small_table, engine):
        summary = engine.exact_distribution(small_table, AssignmentSpace(8, 4))
        # BC flavors only apply to the debiased estimators
        assert len(summary.intervals) == (5 + 2) * 3
        with pytest.raises(KeyError):
            summary.interval("ols_ni", Flavor.BC_HC2, CIMode.Z)
        item = summary.interval("debiased_i", Flavor.BC_HC2, CIMode.SATTERTHWAITE)
        assert 0.0 <= item.coverage <= 1.0
        assert item.median_width > 0

    def test_constant_outcomes(self, constant_table, engine):
        summary = engine.exact_distribution(constant_table, AssignmentSpace(8, 4))
        for stats in summary.estimators.values():
            assert stats.bias == 0.0
            assert stats.sd == 0.0
        assert all(item.coverage == 1.0 for item in summary.intervals)

    def test_budget(self, small_table):
        with pytest.raises(BudgetExceeded):
            RandomizationEngine(threads=1, budget=50).exact_distribution(small_table, AssignmentSpace(8, 4))


class TestSingularAssignments:

    @pytest.fixture
    def tied_table(self):
        z = np.array([0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0])
        return PotentialOutcomeTable(a=z ** 2, b=-z, z=z)

    def test_aborts_with_rank(self, tied_table):
        engine = RandomizationEngine(threads=1)
        with pytest.raises(AssignmentError) as err:
            engine.exact_distribution(tied_table, AssignmentSpace(8, 3))
        assert err.value.rank == 0

    def test_skip(self, tied_table):
        engine = RandomizationEngine(threads=1, skip_singular=True)
        summary = engine.exact_distribution(tied_table, AssignmentSpace(8, 3))
        assert summary.skipped >= 1
        assert summary.evaluated + summary.skipped == 56
        assert 0 not in set(engine.last_records.ranks.tolist())


class TestMonteCarlo:

    def test_reproducible(self, small_table):
        space = AssignmentSpace(8, 4)
        first = RandomizationEngine(threads=1, chunk_size=100).monte_carlo_distribution(small_table, space, 11, 300)
        second = RandomizationEngine(threads=2, chunk_size=100).monte_carlo_distribution(small_table, space, 11, 300)
        assert first.model_dump() == second.model_dump()
        assert first.reps == 300
        assert first.seed == 11

    def test_close_to_exact(self, small_table):
        space = AssignmentSpace(8, 4)
        exact = RandomizationEngine(threads=1).exact_distribution(small_table, space)
        mc = RandomizationEngine(threads=1, chunk_size=500).monte_carlo_distribution(small_table, space, 3, 2000)
        for name, stats in exact.estimators.items():
            bound = 5 * stats.sd / math.sqrt(2000) + 1e-12
            assert abs(mc.estimators[name].mean - stats.mean) <= bound, name
            assert mc.estimators[name].mc_se["mean"] > 0 or stats.sd == 0

    def test_needs_two_reps(self, small_table):
        with pytest.raises(DataError):
            RandomizationEngine(threads=1).monte_carlo_distribution(small_table, AssignmentSpace(8, 4), 1, 1)


def test_evaluate_assignment_columns(small_table):
    record = evaluate_assignment(small_table, unrank(AssignmentSpace(8, 4), 3))
    assert record["se:debiased_ni:bc-hc2"] > 0
    assert "se:ols_ni:bc-hc2" not in record
    assert record["df:interacted:hc2"] > 0


def test_lower_median():
    assert lower_median(np.array([4.0, 1.0, 3.0, 2.0])) == 2.0
    assert lower_median(np.array([5.0, 1.0, 3.0])) == 3.0
