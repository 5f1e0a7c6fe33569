"""Classical-inequality checks and time asymmetry of amplitude-intensity correlations."""

import logging

import numpy as np

from vee_chd.errors import GridMismatch, WrongSeriesKind
from vee_chd.models import AsymmetryReport, CorrelationSeries, ViolationReport

logger = logging.getLogger(__name__)

VIOLATION_SLACK = 1e-9
SYMMETRY_THRESHOLD = 1e-3


def classical_violations(series: CorrelationSeries) -> ViolationReport:
    """Delays where 0 <= h - 1 <= 1 or |h(tau) - 1| <= |h(0) - 1| fails.

    A classical field obeys both inequalities at every delay.
    """
    if not series.kind.is_aic:
        raise WrongSeriesKind(
            "classical AIC bounds apply to amplitude-intensity correlations, "
            f"got {series.kind.value}"
        )
    tau = series.tau
    excess = series.values - 1.0
    magnitude = np.abs(excess)
    origin = magnitude[0]
    report = ViolationReport(
        bound1_lo_violated=tau[excess < -VIOLATION_SLACK],
        bound1_hi_violated=tau[excess > 1.0 + VIOLATION_SLACK],
        bound2_violated=tau[magnitude > origin + VIOLATION_SLACK],
        max_excess=float(magnitude.max()),
    )
    logger.debug(
        "%s: %d/%d/%d violating delays, max |h-1| = %.3g",
        series.kind.value,
        report.bound1_lo_violated.size,
        report.bound1_hi_violated.size,
        report.bound2_violated.size,
        report.max_excess,
    )
    return report


def asymmetry(
    pos: CorrelationSeries, neg: CorrelationSeries, threshold: float = SYMMETRY_THRESHOLD
) -> AsymmetryReport:
    """Sup and RMS distance between h(tau) and h(-tau) on a shared |tau| grid."""
    if pos.grid != neg.grid:
        raise GridMismatch(f"delay grids differ: {pos.grid} vs {neg.grid}")
    if pos.transition is not neg.transition:
        raise GridMismatch(
            f"transitions differ: {pos.transition.value} vs {neg.transition.value}"
        )
    if pos.quadrature != neg.quadrature:
        raise GridMismatch(f"quadratures differ: {pos.quadrature} vs {neg.quadrature}")
    diff = pos.values - neg.values
    sup_diff = float(np.max(np.abs(diff)))
    return AsymmetryReport(
        sup_diff=sup_diff,
        l2_diff=float(np.sqrt(np.mean(diff ** 2))),
        threshold=threshold,
        symmetric_flag=sup_diff < threshold,
    )
