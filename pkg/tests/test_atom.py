"""Tests for the Lindblad generator, steady state and propagation."""

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from numpy.testing import assert_allclose
from pydantic import ValidationError

from tests.conftest import CAPTION_SETS, atom_params
from vee_chd.atom import (
    AtomModel,
    Liouvillian,
    build_liouvillian,
    evolve,
    expansion,
    expectation_series,
    integrate_master_equation,
    solve,
    steady_state,
    two_level_g2,
    two_level_population,
)
from vee_chd.atom.operators import (
    AtomicOp,
    DensityOp,
    commutator,
    dissipator,
    lowering,
    projector,
    raising,
    trace_functional,
    unvec,
    vec,
)
from vee_chd.correlations import g2
from vee_chd.errors import (
    DegenerateNullSpace,
    NonPhysicalState,
    ParameterError,
    UnpopulatedTransition,
)
from vee_chd.models import AtomParams, DelayGrid, Level, Transition
from vee_chd.verification import preset_parameter_sets

PRESET_SETS = preset_parameter_sets()


class TestSuperoperators:
    def test_vec_is_column_stacking(self):
        matrix = np.arange(9).reshape(3, 3)
        assert list(vec(matrix).real) == [0, 3, 6, 1, 4, 7, 2, 5, 8]
        assert_allclose(unvec(vec(matrix)), matrix)

    def test_trace_functional(self):
        rng = np.random.default_rng(3)
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        x = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        assert trace_functional(a) @ vec(x) == pytest.approx(np.trace(a @ x))

    def test_dissipator_matches_matrix_form(self):
        rng = np.random.default_rng(5)
        x = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        c = lowering(Transition.WEAK)
        expected = c @ x @ c.conj().T - 0.5 * (c.conj().T @ c @ x + x @ c.conj().T @ c)
        assert_allclose(unvec(dissipator(c) @ vec(x)), expected, atol=1e-14)

    def test_commutator(self):
        h = raising(Transition.STRONG) + lowering(Transition.STRONG)
        x = projector(Transition.STRONG)
        assert_allclose(unvec(commutator(h) @ vec(x)), h @ x - x @ h)


class TestAtomicOp:
    @pytest.mark.parametrize("j", list(Level))
    @pytest.mark.parametrize("k", list(Level))
    def test_transition_op_has_one_unit_entry(self, j, k):
        op = AtomicOp.transition_op(j, k)
        assert np.count_nonzero(op.matrix) == 1
        assert op.matrix[int(j), int(k)] == 1.0
        assert op.label == f"sigma_{j.name.lower()}{k.name.lower()}"
        assert_allclose(op.dag().matrix, AtomicOp.transition_op(k, j).matrix)

    @pytest.mark.parametrize("transition", list(Transition))
    def test_operator_tables(self, transition):
        level = transition.level
        assert_allclose(raising(transition), AtomicOp.transition_op(level, Level.G).matrix)
        assert_allclose(lowering(transition), raising(transition).T)
        assert_allclose(projector(transition), raising(transition) @ lowering(transition))

    def test_matrix_is_read_only(self):
        op = AtomicOp.transition_op(Level.S, Level.G)
        with pytest.raises(ValueError):
            op.matrix[0, 0] = 1.0

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValidationError):
            AtomicOp(matrix=np.eye(2))


class TestLiouvillian:
    @pytest.mark.parametrize("name", sorted(PRESET_SETS))
    def test_trace_preserving(self, name):
        assert build_liouvillian(PRESET_SETS[name]).trace_residual() < 1e-12

    @pytest.mark.parametrize("name", sorted(PRESET_SETS))
    def test_steady_state_is_stationary(self, name):
        liouvillian = build_liouvillian(PRESET_SETS[name])
        rho = steady_state(liouvillian).rho.matrix
        assert np.max(np.abs(liouvillian.matrix @ vec(rho))) < 1e-10
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)

    def test_eigenvalues_ordered_by_decay(self, saturated):
        eigenvalues = build_liouvillian(saturated).eigenvalues
        assert np.all(np.diff(eigenvalues.real) <= 1e-12)
        assert abs(eigenvalues[0]) < 1e-10

    def test_spectral_gap_is_positive(self, saturated):
        assert build_liouvillian(saturated).spectral_gap() > 0

    def test_degenerate_null_space(self):
        with pytest.raises(DegenerateNullSpace):
            steady_state(Liouvillian.from_matrix(np.zeros((9, 9))))

    def test_no_stationary_state(self):
        with pytest.raises(NonPhysicalState):
            steady_state(Liouvillian.from_matrix(-np.eye(9)))

    def test_non_finite_generator(self):
        matrix = np.zeros((9, 9))
        matrix[0, 0] = np.nan
        with pytest.raises(ParameterError):
            Liouvillian.from_matrix(matrix)

    @settings(max_examples=25, deadline=None)
    @given(params=atom_params())
    def test_steady_state_is_a_density_operator(self, params):
        solution = solve(params)
        rho = solution.steady.rho.matrix
        assert_allclose(rho, rho.conj().T, atol=1e-12)
        assert np.linalg.eigvalsh(rho).min() > -1e-9
        assert solution.liouvillian.eigenvalues.real.max() < 1e-9
        assert solution.liouvillian.trace_residual() < 1e-12


class TestLimits:
    def test_no_drive_gives_ground_state(self):
        steady = solve(AtomParams(gamma_w=0.1, omega_s=0.0, omega_w=0.0)).steady
        assert_allclose(steady.rho.matrix, DensityOp.ground().matrix, atol=1e-12)
        assert steady.population(Transition.STRONG) == pytest.approx(0.0, abs=1e-12)

    def test_undriven_weak_transition_reduces_to_two_levels(self):
        params = AtomParams(gamma_w=0.1, omega_s=1.3, omega_w=0.0)
        steady = solve(params).steady
        assert steady.population(Transition.WEAK) == pytest.approx(0.0, abs=1e-12)
        assert steady.population(Transition.STRONG) == pytest.approx(
            two_level_population(1.3, 1.0), rel=1e-10
        )
        grid = DelayGrid(tau_max=15.0, n_points=301)
        series = g2(params, Transition.STRONG, grid)
        assert_allclose(series.values, two_level_g2(grid.values, 1.3, 1.0), atol=1e-8)

    def test_undriven_transition_has_no_intensity_correlation(self):
        params = AtomParams(gamma_w=0.1, omega_s=1.3, omega_w=0.0)
        with pytest.raises(UnpopulatedTransition):
            g2(params, Transition.WEAK, DelayGrid(tau_max=1.0, n_points=2))

    def test_populations_populate_both_excited_levels(self, strongly_driven):
        steady = solve(strongly_driven).steady
        total = sum(steady.rho.population(level) for level in Level)
        assert total == pytest.approx(1.0, abs=1e-12)
        assert steady.population(Transition.WEAK) > 0


class TestPropagation:
    def test_zero_time_is_identity(self, saturated):
        liouvillian = solve(saturated).liouvillian
        x0 = vec(DensityOp.ground().matrix)
        assert_allclose(evolve(liouvillian, x0, 0.0), x0)

    def test_negative_time_rejected(self, saturated):
        with pytest.raises(ParameterError):
            evolve(solve(saturated).liouvillian, vec(np.eye(3)), -1.0)

    def test_matches_matrix_exponential(self, strongly_driven):
        liouvillian = solve(strongly_driven).liouvillian
        x0 = vec(DensityOp.ground().matrix)
        expected = scipy.linalg.expm(liouvillian.matrix * 2.5) @ x0
        assert_allclose(evolve(liouvillian, x0, 2.5), expected, atol=1e-10)

    @pytest.mark.parametrize("name", sorted(CAPTION_SETS))
    @pytest.mark.parametrize("t", [0.1, 1.0, 10.0])
    def test_preserves_density_operators(self, name, t):
        rng = np.random.default_rng(17)
        liouvillian = solve(CAPTION_SETS[name]).liouvillian
        for _ in range(5):
            a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
            rho = a @ a.conj().T
            rho /= np.trace(rho).real
            evolved = unvec(evolve(liouvillian, vec(rho), t))
            assert np.trace(evolved).real == pytest.approx(1.0, abs=1e-10)
            assert abs(np.trace(evolved).imag) < 1e-10
            assert_allclose(evolved, evolved.conj().T, atol=1e-10)
            assert np.linalg.eigvalsh(0.5 * (evolved + evolved.conj().T)).min() > -1e-9

    def test_steady_state_is_invariant(self, saturated):
        solution = solve(saturated)
        x0 = solution.steady.rho.vector()
        assert_allclose(evolve(solution.liouvillian, x0, 7.0), x0, atol=1e-10)

    @pytest.mark.parametrize("name", ["fig2a", "fig2b", "fig4", "fig5"])
    def test_agrees_with_time_stepping(self, name):
        liouvillian = build_liouvillian(CAPTION_SETS[name])
        x0 = vec(DensityOp.ground().matrix)
        times = np.linspace(0.0, 20.0, 21)
        reference = integrate_master_equation(liouvillian, x0, times)
        propagated = np.array([evolve(liouvillian, x0, t) for t in times])
        assert np.max(np.abs(propagated - reference)) < 1e-6 * np.max(np.abs(reference))

    def test_expansion_reproduces_series(self, saturated):
        solution = solve(saturated)
        observable = projector(Transition.WEAK)
        x0 = vec(DensityOp.ground().matrix)
        times = np.linspace(0.0, 30.0, 61)
        terms = expansion(solution.liouvillian, observable, x0)
        series = expectation_series(solution.liouvillian, observable, x0, times)
        assert_allclose(terms.evaluate(times), series, atol=1e-12)
        assert terms.stationary_value() == pytest.approx(
            solution.steady.population(Transition.WEAK), abs=1e-12
        )

    def test_series_rejects_negative_delays(self, saturated):
        solution = solve(saturated)
        with pytest.raises(ParameterError):
            expectation_series(
                solution.liouvillian, np.eye(3), vec(np.eye(3) / 3), np.array([-1.0, 0.0])
            )

    def test_facade(self, saturated):
        solution = AtomModel.solve(saturated)
        assert solution.params == saturated
        assert AtomModel.steady_state(solution.liouvillian).population(Transition.STRONG) > 0
