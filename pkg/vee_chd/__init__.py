"""
vee-chd - Resonance fluorescence of a V-type three-level atom under bichromatic driving

Intensity and amplitude-intensity correlations, their spectra, squeezing and
fluctuation analyses, driven from named scenarios.
"""

__version__ = "0.1.0"
__author__ = "vee-chd developers"

from vee_chd.analysis import FluctuationAnalyzer
from vee_chd.atom import AtomModel
from vee_chd.correlations import CorrelationCalculator
from vee_chd.scenarios import Scenario, get_preset, run_scenario
from vee_chd.spectra import SpectrumCalculator
from vee_chd.verification import IdentityVerifier

__all__ = [
    "AtomModel",
    "CorrelationCalculator",
    "FluctuationAnalyzer",
    "IdentityVerifier",
    "Scenario",
    "SpectrumCalculator",
    "get_preset",
    "run_scenario",
]
