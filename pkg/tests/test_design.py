"""Tests for experiment data, realization and CSV ingest."""
import numpy as np
import pytest

from design import (
    Assignment,
    ExperimentData,
    PotentialOutcomeTable,
    group_stats,
    ingest_csv,
    realize,
    write_csv,
)
from randomization import AssignmentSpace, enumerate_assignments
from utils.errors import DataError, DegenerateArm, NonBinaryTreatment, ParseError, SizeMismatch


@pytest.fixture
def csv_file(tmp_path):
    def write(text):
        path = tmp_path / "data.csv"
        path.write_text(text, encoding="utf-8")
        return path
    return write


class TestRealize:

    def test_constant_outcomes(self):
        table = PotentialOutcomeTable(a=np.ones(4), b=np.ones(4), z=[1.0, 2.0, 3.0, 5.0])
        data = realize(table, Assignment(4, (1, 3)))
        np.testing.assert_array_equal(data.y, np.ones(4))

    def test_selects_by_arm(self):
        table = PotentialOutcomeTable(a=[1.0, 2.0, 3.0, 4.0], b=np.zeros(4), z=[1.0, 2.0, 3.0, 5.0])
        data = realize(table, Assignment(4, (0, 1)))
        np.testing.assert_array_equal(data.y, [1.0, 2.0, 0.0, 0.0])
        np.testing.assert_array_equal(data.t, [1.0, 1.0, 0.0, 0.0])

    def test_covariates_are_centered(self, small_table):
        data = realize(small_table, Assignment(8, (0, 2, 4, 6)))
        np.testing.assert_allclose(data.z.sum(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(data.z + data.centering_shift, small_table.z)

    def test_inclusion_frequency(self, small_table):
        space = AssignmentSpace(8, 3)
        counts = np.zeros(8)
        for asn in enumerate_assignments(space):
            counts += realize(small_table, asn).t
        np.testing.assert_array_equal(counts / space.total, np.full(8, 3 / 8))

    def test_size_mismatch(self, small_table):
        with pytest.raises(SizeMismatch):
            realize(small_table, Assignment(6, (0, 1, 2)))


class TestValidation:

    def test_degenerate_arm(self):
        with pytest.raises(DegenerateArm):
            Assignment(5, (0,))

    def test_non_binary_treatment(self):
        with pytest.raises(NonBinaryTreatment):
            ExperimentData(y=np.zeros(4), t=[1.0, 0.5, 0.0, 1.0], z=[-1.0, 1.0, -1.0, 1.0])

    def test_uncentered_covariates(self):
        with pytest.raises(DataError):
            ExperimentData(y=np.zeros(4), t=[1.0, 1.0, 0.0, 0.0], z=[1.0, 2.0, 3.0, 4.0])

    def test_table_needs_more_units_than_covariates(self):
        with pytest.raises(DataError):
            PotentialOutcomeTable(a=np.zeros(4), b=np.zeros(4), z=np.eye(4)[:, :2])

    def test_non_finite_rejected(self):
        with pytest.raises(DataError):
            PotentialOutcomeTable(a=[1.0, np.nan, 0.0, 1.0, 2.0], b=np.zeros(5), z=np.arange(5.0))


class TestGroupStats:

    def test_arm_means(self):
        data = ExperimentData(y=[1.0, 1.0, 0.0, 0.0], t=[1.0, 1.0, 0.0, 0.0], z=[-1.0, 1.0, -1.0, 1.0])
        stats = group_stats(data)
        assert stats.mean_y_a == 1.0
        assert stats.mean_y_b == 0.0

    def test_covariate_means(self):
        data = ExperimentData(y=np.zeros(4), t=[1.0, 0.0, 1.0, 0.0], z=[-1.0, 1.0, -1.0, 1.0])
        stats = group_stats(data)
        np.testing.assert_array_equal(stats.mean_z_a, [-1.0])
        np.testing.assert_array_equal(stats.mean_z_b, [1.0])

    def test_centering_identity(self, small_table):
        data = realize(small_table, Assignment(8, (1, 2, 5)))
        stats = group_stats(data)
        np.testing.assert_allclose(stats.p_a * stats.mean_z_a + stats.p_b * stats.mean_z_b, 0.0, atol=1e-14)


class TestIngest:

    def test_reads_and_centers(self, csv_file):
        path = csv_file("y,t,z\n1.5,1,1\n2,1,2\n0,1,3\n1,0,4\n3,0,5\n2,0,6\n")
        data = ingest_csv(path)
        assert data.n == 6
        assert data.n_a == 3
        np.testing.assert_allclose(data.z[:, 0], [-2.5, -1.5, -0.5, 0.5, 1.5, 2.5])
        np.testing.assert_allclose(data.centering_shift, [3.5])

    def test_selected_columns(self, csv_file):
        path = csv_file("outcome,arm,x1,x2,note\n1,1,1,0,7\n2,1,2,1,7\n0,0,3,1,7\n1,0,4,0,7\n")
        data = ingest_csv(path, y_col="outcome", t_col="arm", z_cols=["x1", "x2"])
        assert data.k == 2

    def test_non_binary_treatment(self, csv_file):
        path = csv_file("y,t,z\n1,1,1\n2,2,2\n0,0,3\n1,0,4\n")
        with pytest.raises(NonBinaryTreatment):
            ingest_csv(path)

    def test_missing_value_reports_location(self, csv_file):
        path = csv_file("y,t,z\n1,1,1\n2,1,2\n,0,3\n1,0,4\n")
        with pytest.raises(ParseError) as err:
            ingest_csv(path)
        assert err.value.row == 4
        assert err.value.column == "y"

    def test_unparseable_cell(self, csv_file):
        path = csv_file("y,t,z\n1,1,1\n2,1,abc\n0,0,3\n1,0,4\n")
        with pytest.raises(ParseError) as err:
            ingest_csv(path)
        assert err.value.column == "z"

    def test_missing_column(self, csv_file):
        path = csv_file("y,t,z\n1,1,1\n2,1,2\n0,0,3\n1,0,4\n")
        with pytest.raises(ParseError):
            ingest_csv(path, z_cols=["w"])

    def test_single_treated_unit(self, csv_file):
        path = csv_file("y,t,z\n1,1,1\n2,0,2\n0,0,3\n1,0,4\n")
        with pytest.raises(DegenerateArm):
            ingest_csv(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            ingest_csv(tmp_path / "absent.csv")

    def test_write_then_read(self, small_table, tmp_path):
        data = realize(small_table, Assignment(8, (0, 3, 4, 7)))
        path = write_csv(data, tmp_path / "out" / "data.csv")
        again = ingest_csv(path)
        np.testing.assert_array_equal(again.t, data.t)
        np.testing.assert_allclose(again.y, data.y, rtol=1e-15)
        np.testing.assert_allclose(again.z, data.z, atol=1e-14)
