"""Two-time correlation functions of the fluorescence by quantum regression."""

from vee_chd.correlations.regression import (
    CorrelationCalculator,
    RegressionTerm,
    aic_decomposition,
    aic_negative,
    aic_negative_fluctuation,
    aic_positive,
    correlation_expansion,
    g2,
    negative_fluctuation_term,
    regression_term,
)

__all__ = [
    "CorrelationCalculator",
    "RegressionTerm",
    "aic_decomposition",
    "aic_negative",
    "aic_negative_fluctuation",
    "aic_positive",
    "correlation_expansion",
    "g2",
    "negative_fluctuation_term",
    "regression_term",
]
