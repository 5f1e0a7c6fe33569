"""Cosine spectra of the amplitude-intensity correlation, variance and noise functionals."""

from vee_chd.spectra.spectrum import (
    SpectrumCalculator,
    integrated_spectrum,
    noise_functionals,
    quadrature_spectrum,
    spectrum_negative_side,
    spectrum_positive_side,
    variance,
)

__all__ = [
    "SpectrumCalculator",
    "integrated_spectrum",
    "noise_functionals",
    "quadrature_spectrum",
    "spectrum_negative_side",
    "spectrum_positive_side",
    "variance",
]
