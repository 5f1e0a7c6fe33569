"""Tests for zero-delay moments, classical bounds, asymmetry and curve fits."""

import numpy as np
import pytest
from hypothesis import given, settings
from numpy.testing import assert_allclose

from tests.conftest import CAPTION_SETS, atom_params
from vee_chd.analysis import (
    FluctuationAnalyzer,
    analytic_zero_delay,
    asymmetry,
    classical_violations,
    closed_form_moments,
    direct_moments,
    fit_damped_oscillation,
    fit_decay_rate,
    half_width,
    peak_location,
)
from vee_chd.atom import solve
from vee_chd.correlations import aic_negative, aic_positive, g2
from vee_chd.errors import GridMismatch, ParameterError, WrongSeriesKind
from vee_chd.models import (
    CorrelationKind,
    CorrelationSeries,
    DelayGrid,
    Normalization,
    Quadrature,
    Transition,
)
from vee_chd.verification import preset_parameter_sets, random_parameter_sets


def _synthetic(values, tau_max, kind=CorrelationKind.G2):
    values = np.asarray(values)
    return CorrelationSeries(
        grid=DelayGrid(tau_max=tau_max, n_points=values.size),
        values=values,
        kind=kind,
        transition=Transition.STRONG,
        normalization=Normalization(alpha_ee=0.3),
    )


class TestZeroDelayMoments:
    @pytest.mark.parametrize(
        "params",
        list(preset_parameter_sets().values()) + random_parameter_sets(100, seed=7),
    )
    def test_closed_forms_match_direct_evaluation(self, params):
        for transition in Transition:
            moments = analytic_zero_delay(params, transition)
            assert moments.residual < 1e-12

    @settings(max_examples=25, deadline=None)
    @given(params=atom_params())
    def test_closed_forms_match_direct_evaluation_random(self, params):
        steady = solve(params).steady
        for transition in Transition:
            closed = closed_form_moments(steady, transition)
            direct = direct_moments(steady, transition)
            for name, value in closed.items():
                assert abs(value - direct[name]) < 1e-12

    def test_intensity_moment(self, saturated):
        steady = solve(saturated).steady
        moments = analytic_zero_delay(saturated, Transition.WEAK)
        alpha_eg = steady.coherence(Transition.WEAK)
        assert moments.transition is Transition.WEAK
        assert moments.m_eg_ee == pytest.approx(-alpha_eg * steady.population(Transition.WEAK))
        assert moments.as_array().shape == (5,)


class TestClassicalBounds:
    def test_strong_drive_violates_bounds(self, strongly_driven, out_of_phase, weak_grid):
        series = aic_positive(strongly_driven, Transition.WEAK, out_of_phase, weak_grid)
        report = classical_violations(series)
        assert report.max_excess > 2.0
        assert report.any_violation
        assert report.bound1_hi_violated.size > 0

    def test_zero_delay_value_counts_as_lower_violation(self, saturated, out_of_phase):
        # h(0) - 1 = -1 lies below the classical range [0, 1]
        series = aic_positive(saturated, Transition.WEAK, out_of_phase, DelayGrid(tau_max=1.0))
        report = classical_violations(series)
        assert report.bound1_lo_violated[0] == 0.0

    def test_uncorrelated_field_is_classical(self):
        series = _synthetic(np.ones(11), 10.0, kind=CorrelationKind.AIC_POSITIVE)
        report = classical_violations(series)
        assert not report.any_violation
        assert report.max_excess == 0.0

    def test_rejects_intensity_correlation(self, saturated):
        series = g2(saturated, Transition.WEAK, DelayGrid(tau_max=1.0, n_points=5))
        with pytest.raises(WrongSeriesKind):
            classical_violations(series)


class TestAsymmetry:
    def test_saturated_case_is_asymmetric(self, saturated, out_of_phase, weak_grid):
        pos = aic_positive(saturated, Transition.WEAK, out_of_phase, weak_grid)
        neg = aic_negative(saturated, Transition.WEAK, out_of_phase, weak_grid)
        report = asymmetry(pos, neg)
        assert report.sup_diff > 0.1
        assert not report.symmetric_flag
        assert report.l2_diff <= report.sup_diff

    def test_slight_asymmetry_just_above_saturation(self, out_of_phase, weak_grid):
        params = CAPTION_SETS["fig4"].updated(omega_s=0.25)
        pos = aic_positive(params, Transition.STRONG, out_of_phase, weak_grid)
        neg = aic_negative(params, Transition.STRONG, out_of_phase, weak_grid)
        largest = max(np.max(np.abs(pos.excess())), np.max(np.abs(neg.excess())))
        report = asymmetry(pos, neg)
        assert 0.0 < report.sup_diff < 0.5 * largest

    def test_detuned_strong_laser(self, out_of_phase, weak_grid):
        params = CAPTION_SETS["fig4"].updated(delta_s=3.0)
        pos = aic_positive(params, Transition.WEAK, out_of_phase, weak_grid)
        neg = aic_negative(params, Transition.WEAK, out_of_phase, weak_grid)
        assert asymmetry(pos, neg).sup_diff > 1e-6

    def test_identical_branches_are_symmetric(self, saturated, out_of_phase, weak_grid):
        pos = aic_positive(saturated, Transition.WEAK, out_of_phase, weak_grid)
        report = FluctuationAnalyzer.asymmetry(pos, pos)
        assert report.sup_diff == 0.0
        assert report.symmetric_flag

    def test_grid_mismatch(self, saturated, out_of_phase):
        pos = aic_positive(saturated, Transition.WEAK, out_of_phase, DelayGrid(tau_max=10.0))
        neg = aic_negative(saturated, Transition.WEAK, out_of_phase, DelayGrid(tau_max=20.0))
        with pytest.raises(GridMismatch):
            asymmetry(pos, neg)

    def test_quadrature_mismatch(self, saturated, weak_grid):
        pos = aic_positive(saturated, Transition.WEAK, Quadrature(phi=1.0), weak_grid)
        neg = aic_negative(saturated, Transition.WEAK, Quadrature(phi=2.0), weak_grid)
        with pytest.raises(GridMismatch):
            asymmetry(pos, neg)


class TestFits:
    def test_damped_oscillation(self):
        tau = np.linspace(0.0, 20.0, 4001)
        series = _synthetic(1.0 - np.exp(-0.5 * tau) * np.cos(3.0 * tau), 20.0)
        fit = fit_damped_oscillation(series)
        assert fit.frequency == pytest.approx(3.0, rel=0.02)
        assert fit.decay_rate == pytest.approx(0.5, rel=0.02)

    def test_decay_rate(self):
        tau = np.linspace(0.0, 20.0, 2001)
        series = _synthetic(1.0 - np.exp(-0.4 * tau), 20.0)
        assert fit_decay_rate(series, window=(1.0, 15.0)) == pytest.approx(0.4, rel=1e-6)

    def test_window_too_narrow(self):
        tau = np.linspace(0.0, 20.0, 201)
        series = _synthetic(1.0 - np.exp(-0.4 * tau), 20.0)
        with pytest.raises(ParameterError):
            fit_decay_rate(series, window=(1.0, 1.2))

    def test_oscillation_needs_maxima(self):
        tau = np.linspace(0.0, 20.0, 2001)
        series = _synthetic(1.0 - np.exp(-0.4 * tau), 20.0)
        with pytest.raises(ParameterError):
            fit_damped_oscillation(series)

    def test_peak_location_refines_between_points(self):
        omega = np.linspace(-5.0, 5.0, 201)
        values = 1.0 / (1.0 + ((omega - 1.23) / 0.4) ** 2)
        assert peak_location(omega, values) == pytest.approx(1.23, abs=1e-2)

    def test_peak_location_empty_window(self):
        with pytest.raises(ParameterError):
            peak_location(np.linspace(0, 1, 11), np.zeros(11), lower=2.0)

    def test_half_width_of_lorentzian(self):
        omega = np.linspace(-5.0, 5.0, 100001)
        values = 1.0 / (1.0 + (omega / 0.3) ** 2)
        assert half_width(omega, values) == pytest.approx(0.3, rel=1e-4)

    def test_half_width_needs_positive_peak(self):
        omega = np.linspace(-1.0, 1.0, 11)
        with pytest.raises(ParameterError):
            half_width(omega, -np.ones(11))

    def test_facade_fits_real_series(self, strongly_driven):
        series = g2(strongly_driven, Transition.STRONG, DelayGrid(tau_max=20.0, n_points=4001))
        fit = FluctuationAnalyzer.fit_damped_oscillation(series, window=(0.0, 10.0))
        assert_allclose([fit.frequency, fit.decay_rate], [3.5, 0.75], rtol=0.25)
