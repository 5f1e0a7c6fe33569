"""Zero-delay fluctuation moments of the stationary dipole.

Closed forms in terms of the expectation table alpha, checked against a
direct trace over the stationary density operator.
"""

import logging
from typing import Dict

import numpy as np

from vee_chd.atom import SteadyState, solve
from vee_chd.atom.operators import expectation, fluctuation, lowering, projector, raising
from vee_chd.models import AtomParams, Transition, ZeroDelayMoments

logger = logging.getLogger(__name__)

MOMENT_TOLERANCE = 1e-12


def closed_form_moments(steady: SteadyState, transition: Transition) -> Dict[str, complex]:
    alpha_eg = steady.coherence(transition)
    alpha_ge = np.conj(alpha_eg)
    alpha_ee = steady.population(transition)
    excess = abs(alpha_eg) ** 2 - alpha_ee
    return {
        "m_eg_ge": complex(alpha_ee - abs(alpha_eg) ** 2),
        "m_eg_eg": complex(-(alpha_eg ** 2)),
        "m_eg_ee": complex(-alpha_eg * alpha_ee),
        "m_eg_ge_ge": complex(2.0 * alpha_ge * excess),
        "m_eg_eg_ge": complex(2.0 * alpha_eg * excess),
    }


def direct_moments(steady: SteadyState, transition: Transition) -> Dict[str, complex]:
    """The same moments as Tr[Delta.. Delta.. rho] matrix products."""
    rho = steady.rho.matrix
    alpha_eg = steady.coherence(transition)
    d_eg = fluctuation(raising(transition), alpha_eg)
    d_ge = fluctuation(lowering(transition), np.conj(alpha_eg))
    d_ee = fluctuation(projector(transition), steady.population(transition))
    return {
        "m_eg_ge": expectation(d_eg @ d_ge, rho),
        "m_eg_eg": expectation(d_eg @ d_eg, rho),
        "m_eg_ee": expectation(d_eg @ d_ee, rho),
        "m_eg_ge_ge": expectation(d_eg @ d_ge @ d_ge, rho),
        "m_eg_eg_ge": expectation(d_eg @ d_eg @ d_ge, rho),
    }


def analytic_zero_delay(params: AtomParams, transition: Transition) -> ZeroDelayMoments:
    """Closed-form zero-delay moments with their deviation from direct evaluation."""
    steady = solve(params).steady
    closed = closed_form_moments(steady, transition)
    direct = direct_moments(steady, transition)
    residual = max(abs(closed[name] - direct[name]) for name in closed)
    if residual > MOMENT_TOLERANCE:
        logger.warning(
            "zero-delay moments of the %s transition deviate from direct evaluation by %.3e",
            transition.value,
            residual,
        )
    return ZeroDelayMoments(transition=transition, residual=residual, **closed)
