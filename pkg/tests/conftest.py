"""Shared fixtures: figure parameter sets, quadratures and grids."""

import math

import pytest
from hypothesis import strategies as st

from vee_chd.models import AtomParams, DelayGrid, Quadrature
from vee_chd.scenarios import PRESETS

# Figure captions: gamma_w = Omega_w = 0.1, zero detunings
CAPTION_SETS = {
    "fig2a": AtomParams(gamma_w=0.1, omega_s=0.5, omega_w=0.1),
    "fig2b": AtomParams(gamma_w=0.1, omega_s=3.5, omega_w=0.1),
    "fig4": AtomParams(gamma_w=0.1, omega_s=0.5, omega_w=0.1),
    "fig5": AtomParams(gamma_w=0.1, omega_s=3.5, omega_w=0.1),
}

PRESET_NAMES = sorted(PRESETS)


@pytest.fixture
def out_of_phase() -> Quadrature:
    return Quadrature(phi=math.pi / 2)


@pytest.fixture
def saturated() -> AtomParams:
    """Strong transition near saturation (fig4/fig6 parameters)."""
    return CAPTION_SETS["fig4"]


@pytest.fixture
def strongly_driven() -> AtomParams:
    """Strong transition driven well above saturation (fig5/fig7 parameters)."""
    return CAPTION_SETS["fig5"]


@pytest.fixture
def weak_grid() -> DelayGrid:
    return DelayGrid(tau_max=100.0, n_points=2001)


@pytest.fixture
def strong_grid() -> DelayGrid:
    return DelayGrid(tau_max=20.0, n_points=2001)


def atom_params() -> st.SearchStrategy:
    """Driven, possibly detuned parameter sets in units of gamma_s."""
    return st.builds(
        AtomParams,
        gamma_w=st.floats(min_value=0.01, max_value=1.0),
        omega_s=st.floats(min_value=0.05, max_value=5.0),
        omega_w=st.floats(min_value=0.05, max_value=5.0),
        delta_s=st.floats(min_value=-2.0, max_value=2.0),
        delta_w=st.floats(min_value=-2.0, max_value=2.0),
    )
