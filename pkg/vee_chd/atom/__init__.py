"""Atom model: operators, Lindblad generator, steady state and propagation."""

from vee_chd.atom.liouvillian import (
    AtomModel,
    AtomSolution,
    Expansion,
    Liouvillian,
    SteadyState,
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
from vee_chd.atom.operators import AtomicOp, DensityOp

__all__ = [
    "AtomModel",
    "AtomSolution",
    "AtomicOp",
    "DensityOp",
    "Expansion",
    "Liouvillian",
    "SteadyState",
    "build_liouvillian",
    "evolve",
    "expansion",
    "expectation_series",
    "integrate_master_equation",
    "solve",
    "steady_state",
    "two_level_g2",
    "two_level_population",
]
