#!/usr/bin/env python3
"""
Example usage of the vee-chd simulator
"""

import asyncio

import numpy as np

from vee_chd import (
    CorrelationCalculator,
    FluctuationAnalyzer,
    SpectrumCalculator,
    get_preset,
)
from vee_chd.models import AtomParams, DelayGrid, FrequencyGrid, Quadrature, Transition
from vee_chd.scenarios import run_scenario_async


def example_correlations():
    """Example: antibunching and the AIC decomposition"""
    print("=" * 60)
    print("EXAMPLE 1: Correlations of the weak transition")
    print("=" * 60)

    params = AtomParams(gamma_w=0.1, omega_s=0.5, omega_w=0.1)
    quadrature = Quadrature.out_of_phase()
    grid = DelayGrid(tau_max=100.0, n_points=2001)

    g2 = CorrelationCalculator.g2(params, Transition.WEAK, grid)
    pos = CorrelationCalculator.aic_positive(params, Transition.WEAK, quadrature, grid)
    neg = CorrelationCalculator.aic_negative(params, Transition.WEAK, quadrature, grid)
    h2, h3 = CorrelationCalculator.aic_decomposition(params, Transition.WEAK, quadrature, grid)

    print(f"g2(0)              = {g2.values[0]:.3e}")
    print(f"h(0)               = {pos.values[0]:.3e}")
    print(f"h3(0)              = {h3.values[0]:.6f}")
    print(f"max |h(t) - h(-t)| = {np.max(np.abs(pos.values - neg.values)):.4f}")

    report = FluctuationAnalyzer.classical_violations(pos)
    print(f"delays breaking |h-1| <= |h(0)-1|: {report.bound2_violated.size}")


def example_spectra():
    """Example: spectra and squeezing"""
    print("\n" + "=" * 60)
    print("EXAMPLE 2: Spectra of the weak transition")
    print("=" * 60)

    params = AtomParams(gamma_w=0.1, omega_s=3.5, omega_w=0.1)
    quadrature = Quadrature.out_of_phase()
    grid = FrequencyGrid(omega_max=5.0, n_points=2001)

    spectrum = SpectrumCalculator.spectrum_positive_side(
        params, Transition.WEAK, quadrature, grid
    )
    peak = FluctuationAnalyzer.peak_location(spectrum.omega, spectrum.total, lower=0.5)
    print(f"sideband peak at omega = {peak:.3f}")

    noise = SpectrumCalculator.noise_functionals(params, Transition.WEAK, quadrature)
    print(f"H2={noise.h2_0:.4e}  H3={noise.h3_0:.4e}  HN={noise.hN_0:.4e}  V={noise.variance:.4e}")


async def example_scenario():
    """Example: run a figure preset"""
    print("\n" + "=" * 60)
    print("EXAMPLE 3: Figure preset")
    print("=" * 60)

    table = await run_scenario_async(get_preset("fig9"), workers=2)
    print(table.render().splitlines()[0])
    print(f"{table.rows.shape[0]} rows, columns {', '.join(table.headers)}")


if __name__ == "__main__":
    print("vee-chd - Usage Examples")
    print()

    example_correlations()
    example_spectra()
    asyncio.run(example_scenario())

    print("\n" + "=" * 60)
    print("Examples complete!")
    print("=" * 60)
