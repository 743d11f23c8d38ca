"""Tests for sandwich variances, Satterthwaite df and intervals."""
import numpy as np
import pytest
import statsmodels.api as sm

from design import Assignment, ExperimentData, realize
from estimators import estimate_all
from variance import (
    CIMode,
    DesignKind,
    Flavor,
    bc_residuals,
    confidence_interval,
    critical_value,
    design_matrix,
    fit_ols,
    hc_variance,
    residual_df,
    StudentDf,
    satterthwaite_df,
    t_df,
    variance_report,
)
from utils.errors import DomainError, LeverageOne


@pytest.fixture
def two_sample():
    y = np.array([2.0, 3.5, 1.0, 4.0, 0.5, 1.5, -1.0, 2.0, 0.0, 1.0])
    t = np.array([1, 1, 1, 1, 0, 0, 0, 0, 0, 0], dtype=float)
    x = np.column_stack([np.ones(10), t])
    return y, t, fit_ols(y, x)


@pytest.fixture
def noninteracted_fit(small_table):
    data = realize(small_table, Assignment(8, (0, 2, 3, 7)))
    return data, fit_ols(data.y, design_matrix(data, DesignKind.NONINTERACTED))


class TestSandwich:

    def test_zero_residuals(self):
        t = np.array([1.0, 1.0, 0.0, 0.0, 0.0])
        x = np.column_stack([np.ones(5), t])
        ctx = fit_ols(2.0 + 3.0 * t, x)
        assert hc_variance(ctx, Flavor.HC2) == pytest.approx(0.0, abs=1e-25)

    def test_two_sample_hc2(self, two_sample):
        y, t, ctx = two_sample
        treated, control = y[t == 1], y[t == 0]
        expected = treated.var(ddof=1) / len(treated) + control.var(ddof=1) / len(control)
        assert ctx.coefficient == pytest.approx(treated.mean() - control.mean())
        assert hc_variance(ctx, Flavor.HC2) == pytest.approx(expected, rel=1e-12)

    def test_hc3_dominates_hc2(self, noninteracted_fit):
        _, ctx = noninteracted_fit
        assert hc_variance(ctx, Flavor.HC3) >= hc_variance(ctx, Flavor.HC2)

    @pytest.mark.parametrize("flavor, cov_type", [(Flavor.HC2, "HC2"), (Flavor.HC3, "HC3")])
    def test_matches_statsmodels(self, noninteracted_fit, flavor, cov_type):
        data, ctx = noninteracted_fit
        reference = sm.OLS(data.y, ctx.x).fit(cov_type=cov_type)
        assert hc_variance(ctx, flavor) == pytest.approx(reference.bse[1] ** 2, rel=1e-9)

    def test_leverage_one(self):
        t = np.array([1.0, 0.0, 0.0, 0.0, 0.0])
        x = np.column_stack([np.ones(5), t])
        ctx = fit_ols(np.array([1.0, 2.0, 3.0, 4.0, 5.0]), x)
        with pytest.raises(LeverageOne):
            hc_variance(ctx, Flavor.HC2)


class TestBiasCorrectedResiduals:

    def test_same_coefficient_same_variance(self, noninteracted_fit):
        _, ctx = noninteracted_fit
        swapped = bc_residuals(ctx, ctx.coefficient)
        np.testing.assert_allclose(swapped.residuals, ctx.residuals, atol=1e-14)
        assert hc_variance(swapped, Flavor.BC_HC2) == pytest.approx(hc_variance(ctx, Flavor.HC2), rel=1e-12)

    def test_shift_moves_residuals_along_treatment(self, noninteracted_fit):
        data, ctx = noninteracted_fit
        delta = 0.37
        swapped = bc_residuals(ctx, ctx.coefficient + delta)
        np.testing.assert_allclose(swapped.residuals, ctx.residuals - delta * data.t, atol=1e-14)
        assert swapped.hat is ctx.hat


class TestDegreesOfFreedom:

    def test_balanced_two_sample(self):
        y = np.array([1.0, 2.0, 4.0, 0.0, 3.0, 1.0, 1.0, 5.0])
        t = np.array([1, 1, 1, 1, 0, 0, 0, 0], dtype=float)
        ctx = fit_ols(y, np.column_stack([np.ones(8), t]))
        assert satterthwaite_df(ctx, Flavor.HC2) == pytest.approx(6.0, rel=1e-12)

    def test_bounded_by_n(self, noninteracted_fit):
        _, ctx = noninteracted_fit
        for flavor in (Flavor.HC2, Flavor.HC3):
            df = satterthwaite_df(ctx, flavor)
            assert 0 < df <= ctx.n

    def test_residual_df(self, noninteracted_fit):
        _, ctx = noninteracted_fit
        assert residual_df(ctx) == 8 - 4


class TestIntervals:

    def test_normal_critical_value(self):
        lower, upper = confidence_interval(0.0, 1.0, CIMode.Z, level=0.95)
        assert upper == pytest.approx(1.959964, abs=1e-6)
        assert lower == -upper

    def test_zero_standard_error(self):
        assert confidence_interval(1.25, 0.0, CIMode.T, df=5) == (1.25, 1.25)

    def test_student_needs_df(self):
        with pytest.raises(DomainError):
            critical_value(CIMode.T)

    def test_level_domain(self):
        with pytest.raises(DomainError):
            critical_value(CIMode.Z, level=1.0)

    def test_student_wider_than_normal(self):
        assert critical_value(CIMode.T, df=6) > critical_value(CIMode.Z)

    def test_report(self, small_table):
        data = realize(small_table, Assignment(8, (1, 2, 4, 6)))
        estimate = estimate_all(data).debiased_ni
        ctx = fit_ols(data.y, design_matrix(data, DesignKind.NONINTERACTED))
        report = variance_report(ctx, Flavor.BC_HC2, estimate, level=0.9)
        assert report.flavor == Flavor.BC_HC2
        assert report.df_t == 7.0
        assert report.df_satt == pytest.approx(satterthwaite_df(ctx, Flavor.HC2))
        half = report.ci_satt[1] - estimate
        assert half == pytest.approx(critical_value(CIMode.SATTERTHWAITE, report.df_satt, 0.9) * report.se)
        assert report.ci_z[0] < estimate < report.ci_z[1]

    def test_residual_rule_report(self, small_table):
        data = realize(small_table, Assignment(8, (1, 2, 4, 6)))
        ctx = fit_ols(data.y, design_matrix(data, DesignKind.NONINTERACTED))
        units = variance_report(ctx, Flavor.HC2, 0.5, t_rule=StudentDf.UNITS)
        residual = variance_report(ctx, Flavor.HC2, 0.5, t_rule=StudentDf.RESIDUAL)
        assert residual.df_t == residual_df(ctx) == 4.0
        assert residual.ci_t[1] - residual.ci_t[0] > units.ci_t[1] - units.ci_t[0]
        assert residual.ci_z == units.ci_z


class TestStudentDf:

    def test_units_rule(self):
        assert t_df(24, 8, StudentDf.UNITS) == 23.0

    def test_residual_rule(self):
        assert t_df(24, 8, StudentDf.RESIDUAL) == 16.0
        assert t_df(24, 8, "residual") == 16.0

    def test_default_from_settings(self, isolated_settings, monkeypatch):
        assert t_df(12, 4) == 11.0
        monkeypatch.setattr(isolated_settings, "T_DF", "residual")
        assert t_df(12, 4) == 8.0

    def test_unknown_rule(self):
        with pytest.raises(ValueError):
            t_df(12, 4, "kenward")


def test_design_widths(small_table):
    data = realize(small_table, Assignment(8, (0, 1, 2, 3)))
    assert design_matrix(data, DesignKind.UNADJUSTED).shape == (8, 2)
    assert design_matrix(data, DesignKind.NONINTERACTED).shape == (8, 4)
    assert design_matrix(data, DesignKind.INTERACTED).shape == (8, 6)


def test_fit_on_hand_built_dataset():
    data = ExperimentData(y=[1.0, 2.0, 0.0, 1.0, 3.0], t=[1.0, 1.0, 0.0, 0.0, 0.0],
                          z=[-2.0, -1.0, 0.0, 1.0, 2.0])
    ctx = fit_ols(data.y, design_matrix(data, DesignKind.NONINTERACTED))
    assert ctx.x.shape == (5, 3)
    reference = sm.OLS(data.y, ctx.x).fit()
    np.testing.assert_allclose(ctx.beta, reference.params, atol=1e-12)
