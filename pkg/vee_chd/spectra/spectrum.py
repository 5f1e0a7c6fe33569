"""One-sided cosine spectra of the amplitude-intensity correlation and the quadrature noise.

S(omega) = 4 gamma_e alpha_ee int_0^inf [h(tau) - 1] cos(omega tau) dtau, evaluated
in closed form from the eigen-expansion of the correlation numerator.  The
stationary term of the expansion is exactly the uncorrelated background, so
dropping it performs the subtraction of 1.
"""

import logging
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid

from vee_chd.analysis.moments import closed_form_moments
from vee_chd.atom import solve
from vee_chd.correlations import correlation_expansion
from vee_chd.errors import ParameterError, TailNotConverged
from vee_chd.models import (
    AtomParams,
    CorrelationKind,
    FrequencyGrid,
    NoiseReport,
    Quadrature,
    SpectrumSeries,
    SpectrumSide,
    Transition,
)

logger = logging.getLogger(__name__)

CUTOFF_DECAY_TIMES = 60.0
TAIL_TOLERANCE = 1e-4
DEFAULT_QUADRATURE_POINTS = 60001


def _analytic_transform(
    params: AtomParams,
    transition: Transition,
    kind: CorrelationKind,
    quadrature: Quadrature,
    omega: np.ndarray,
) -> np.ndarray:
    """4 gamma_e alpha_ee times the cosine transform of the normalized excess."""
    terms, weight, norm = correlation_expansion(params, transition, kind, quadrature)
    gamma, _, _ = params.rates(transition)
    prefactor = 4.0 * gamma * norm.alpha_ee / norm.denominator
    return prefactor * np.real(weight * terms.transient().cosine_transform(omega))


def spectrum_positive_side(
    params: AtomParams,
    transition: Transition,
    quadrature: Quadrature,
    grid: Optional[FrequencyGrid] = None,
    efficiency_eta: float = 1.0,
) -> SpectrumSeries:
    """Spectrum of h(tau >= 0) with its second- and third-order parts."""
    grid = grid or FrequencyGrid()
    omega = grid.values
    total = _analytic_transform(params, transition, CorrelationKind.AIC_POSITIVE, quadrature, omega)
    s2 = _analytic_transform(params, transition, CorrelationKind.AIC2, quadrature, omega)
    s3 = _analytic_transform(params, transition, CorrelationKind.AIC3, quadrature, omega)
    return SpectrumSeries(
        grid=grid,
        total=total,
        s2=s2,
        s3=s3,
        side=SpectrumSide.POSITIVE_DELAY,
        transition=transition,
        quadrature=quadrature,
        efficiency_eta=efficiency_eta,
    )


def spectrum_negative_side(
    params: AtomParams,
    transition: Transition,
    quadrature: Quadrature,
    grid: Optional[FrequencyGrid] = None,
    efficiency_eta: float = 1.0,
) -> SpectrumSeries:
    """Spectrum of h(tau <= 0); second order only, so s3 is identically zero."""
    grid = grid or FrequencyGrid()
    total = _analytic_transform(
        params, transition, CorrelationKind.AIC_NEGATIVE, quadrature, grid.values
    )
    return SpectrumSeries(
        grid=grid,
        total=total,
        s2=total,
        s3=np.zeros_like(total),
        side=SpectrumSide.NEGATIVE_DELAY,
        transition=transition,
        quadrature=quadrature,
        efficiency_eta=efficiency_eta,
    )


def variance(params: AtomParams, transition: Transition, quadrature: Quadrature) -> float:
    """Normally ordered quadrature variance V_phi = <:(Delta sigma_phi)^2:>.

    Negative values signal squeezing.
    """
    moments = closed_form_moments(solve(params).steady, transition)
    phase = quadrature.phase
    return float(
        0.5 * np.real(phase ** 2 * moments["m_eg_eg"]) + 0.5 * np.real(moments["m_eg_ge"])
    )


def noise_functionals(
    params: AtomParams, transition: Transition, quadrature: Quadrature
) -> NoiseReport:
    """Zero-delay noise H^(2), H^(3), H^(N) together with V_phi."""
    steady = solve(params).steady
    moments = closed_form_moments(steady, transition)
    phase = quadrature.phase
    alpha_ge = np.conj(steady.coherence(transition))
    # <Delta sigma_eg Delta sigma_phi> and <Delta sigma_eg Delta sigma_phi Delta sigma_ge>
    second = 0.5 * (phase * moments["m_eg_eg"] + np.conj(phase) * moments["m_eg_ge"])
    third = 0.5 * (phase * moments["m_eg_eg_ge"] + np.conj(phase) * moments["m_eg_ge_ge"])
    return NoiseReport(
        h2_0=float(2.0 * np.real(alpha_ge * second)),
        h3_0=float(np.real(third)),
        hN_0=float(np.real(phase * moments["m_eg_ee"])),
        variance=variance(params, transition, quadrature),
    )


def _trapezoid_cosine(excess: np.ndarray, tau: np.ndarray, omega: np.ndarray) -> np.ndarray:
    return np.array([trapezoid(excess * np.cos(w * tau), tau) for w in omega])


def quadrature_spectrum(
    params: AtomParams,
    transition: Transition,
    quadrature: Quadrature,
    omega: np.ndarray,
    kind: CorrelationKind = CorrelationKind.AIC_POSITIVE,
    n_points: int = DEFAULT_QUADRATURE_POINTS,
) -> np.ndarray:
    """Spectrum by trapezoid quadrature in tau, Richardson-extrapolated over a halved step.

    Intended for a handful of frequencies; the delay integral is truncated at
    60 / min(gamma_s, gamma_w).
    """
    if n_points < 5 or n_points % 2 == 0:
        raise ParameterError(f"n_points must be odd and at least 5, got {n_points}")
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    terms, weight, norm = correlation_expansion(params, transition, kind, quadrature)
    cutoff = CUTOFF_DECAY_TIMES / min(params.gamma_s, params.gamma_w)
    transient = terms.transient()

    tail = abs(weight) * transient.tail_bound(cutoff) / abs(norm.denominator)
    if tail > TAIL_TOLERANCE:
        raise TailNotConverged(
            f"|h - 1| may still reach {tail:.3e} at tau = {cutoff:g}; integral truncated too early"
        )

    tau = np.linspace(0.0, cutoff, n_points)
    background = 1.0 if kind.is_aic else 0.0
    excess = np.real(weight * terms.evaluate(tau)) / norm.denominator - background
    fine = _trapezoid_cosine(excess, tau, omega)
    coarse = _trapezoid_cosine(excess[::2], tau[::2], omega)
    gamma, _, _ = params.rates(transition)
    logger.debug("quadrature spectrum of %s over %d delays", kind.value, n_points)
    return 4.0 * gamma * norm.alpha_ee * (4.0 * fine - coarse) / 3.0


def integrated_spectrum(omega: np.ndarray, values: np.ndarray, one_sided: bool = True) -> float:
    """Frequency integral of a spectrum, with an A/omega^2 tail beyond the grid edge.

    ``one_sided`` restricts the integral to omega >= 0.
    """
    omega = np.asarray(omega, dtype=float)
    values = np.asarray(values, dtype=float)
    if omega.shape != values.shape:
        raise ParameterError("frequency grid and spectrum differ in length")
    if one_sided:
        keep = omega >= 0
        omega, values = omega[keep], values[keep]
    if omega.size < 2:
        raise ParameterError("need at least two frequencies to integrate")
    # S ~ A/omega^2 beyond the edge integrates to S(edge) * edge
    result = trapezoid(values, omega) + values[-1] * omega[-1]
    if not one_sided and omega[0] < 0:
        result += values[0] * abs(omega[0])
    return float(result)


class SpectrumCalculator:
    """Stateless entry points for spectra and zero-delay noise."""

    spectrum_positive_side = staticmethod(spectrum_positive_side)
    spectrum_negative_side = staticmethod(spectrum_negative_side)
    variance = staticmethod(variance)
    noise_functionals = staticmethod(noise_functionals)
    quadrature_spectrum = staticmethod(quadrature_spectrum)
    integrated_spectrum = staticmethod(integrated_spectrum)
