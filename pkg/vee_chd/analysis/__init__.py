"""Zero-delay moments, classical-bound violations, asymmetry and curve fits."""

from vee_chd.analysis.fits import (
    DampedOscillation,
    fit_damped_oscillation,
    fit_decay_rate,
    half_width,
    peak_location,
)
from vee_chd.analysis.fluctuations import asymmetry, classical_violations
from vee_chd.analysis.moments import analytic_zero_delay, closed_form_moments, direct_moments


class FluctuationAnalyzer:
    """Stateless entry points for the fluctuation analyses."""

    analytic_zero_delay = staticmethod(analytic_zero_delay)
    classical_violations = staticmethod(classical_violations)
    asymmetry = staticmethod(asymmetry)
    fit_damped_oscillation = staticmethod(fit_damped_oscillation)
    fit_decay_rate = staticmethod(fit_decay_rate)
    peak_location = staticmethod(peak_location)
    half_width = staticmethod(half_width)


__all__ = [
    "DampedOscillation",
    "FluctuationAnalyzer",
    "analytic_zero_delay",
    "asymmetry",
    "classical_violations",
    "closed_form_moments",
    "direct_moments",
    "fit_damped_oscillation",
    "fit_decay_rate",
    "half_width",
    "peak_location",
]
