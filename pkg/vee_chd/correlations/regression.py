"""Two-time correlations of the scattered field by the quantum regression formula.

Every correlation here has the form

    numerator(tau) = Re[ w * Tr(A e^{L tau} X0) ]

for an observable A, a conditional initial operator X0 built from the
stationary state, and a complex weight w.  <A(0) B(tau) C(0)> uses
X0 = C rho A with observable B.
"""

import logging
from typing import NamedTuple, Optional, Tuple

import numpy as np

from vee_chd.atom import AtomSolution, Expansion, expansion, expectation_series, solve
from vee_chd.atom.operators import (
    fluctuation,
    lowering,
    projector,
    quadrature_operator,
    raising,
    vec,
)
from vee_chd.errors import (
    DegenerateQuadratureMean,
    NonPhysicalState,
    ParameterError,
    UnpopulatedTransition,
)
from vee_chd.models import (
    AtomParams,
    CorrelationKind,
    CorrelationSeries,
    DelayGrid,
    Normalization,
    Quadrature,
    Transition,
)

logger = logging.getLogger(__name__)

POPULATION_FLOOR = 1e-12
QUADRATURE_FLOOR = 1e-12
G2_ZERO_TOLERANCE = 1e-12
AIC_ZERO_TOLERANCE = 1e-10


class RegressionTerm(NamedTuple):
    observable: np.ndarray
    initial: np.ndarray
    weight: complex
    normalization: Normalization

    def numerator(self, solution: AtomSolution, times: np.ndarray) -> np.ndarray:
        raw = expectation_series(solution.liouvillian, self.observable, self.initial, times)
        return np.real(self.weight * raw)

    def expansion(self, solution: AtomSolution) -> Expansion:
        return expansion(solution.liouvillian, self.observable, self.initial)


def _excited_population(solution: AtomSolution, transition: Transition) -> float:
    alpha_ee = solution.steady.population(transition)
    if alpha_ee <= POPULATION_FLOOR:
        raise UnpopulatedTransition(
            f"{transition.value} transition population {alpha_ee:.3e} is below {POPULATION_FLOOR:g}"
        )
    return alpha_ee


def _aic_normalization(
    solution: AtomSolution, transition: Transition, quadrature: Optional[Quadrature]
) -> Normalization:
    if quadrature is None:
        raise ParameterError("amplitude-intensity correlations need a quadrature")
    alpha_ee = _excited_population(solution, transition)
    alpha_phi = solution.steady.quadrature_mean(transition, quadrature.phi)
    if abs(alpha_phi) <= QUADRATURE_FLOOR:
        raise DegenerateQuadratureMean(
            f"stationary quadrature mean {alpha_phi:.3e} vanishes at phi={quadrature.phi:.6g} "
            f"({transition.value} transition); a coherent offset would be required"
        )
    return Normalization(alpha_ee=alpha_ee, alpha_phi=alpha_phi)


def regression_term(
    solution: AtomSolution,
    transition: Transition,
    kind: CorrelationKind,
    quadrature: Optional[Quadrature] = None,
) -> RegressionTerm:
    """Observable, conditional initial operator and weight for a correlation kind."""
    rho = solution.steady.rho.matrix
    sigma_eg, sigma_ge = raising(transition), lowering(transition)

    if kind is CorrelationKind.G2:
        alpha_ee = _excited_population(solution, transition)
        return RegressionTerm(
            projector(transition),
            vec(sigma_ge @ rho @ sigma_eg),
            1.0,
            Normalization(alpha_ee=alpha_ee),
        )

    norm = _aic_normalization(solution, transition, quadrature)
    sigma_phi = quadrature_operator(transition, quadrature.phi)

    if kind is CorrelationKind.AIC_POSITIVE:
        return RegressionTerm(sigma_phi, vec(sigma_ge @ rho @ sigma_eg), 1.0, norm)
    if kind is CorrelationKind.AIC_NEGATIVE:
        return RegressionTerm(projector(transition), vec(rho @ sigma_eg), quadrature.phase, norm)

    alpha_eg = solution.steady.coherence(transition)
    delta_eg = fluctuation(sigma_eg, alpha_eg)
    delta_ge = fluctuation(sigma_ge, np.conj(alpha_eg))
    delta_phi = fluctuation(sigma_phi, norm.alpha_phi)
    if kind is CorrelationKind.AIC2:
        return RegressionTerm(delta_phi, vec(rho @ delta_eg), 2.0 * np.conj(alpha_eg), norm)
    if kind is CorrelationKind.AIC3:
        return RegressionTerm(delta_phi, vec(delta_ge @ rho @ delta_eg), 1.0, norm)
    raise ParameterError(f"unsupported correlation kind {kind!r}")


def negative_fluctuation_term(
    solution: AtomSolution, transition: Transition, quadrature: Quadrature
) -> RegressionTerm:
    """Re[e^{-i phi} <Delta sigma_eg(0) Delta sigma_ee(|tau|)>], the whole of h(tau<=0) - 1."""
    norm = _aic_normalization(solution, transition, quadrature)
    rho = solution.steady.rho.matrix
    delta_eg = fluctuation(raising(transition), solution.steady.coherence(transition))
    delta_ee = fluctuation(projector(transition), norm.alpha_ee)
    return RegressionTerm(delta_ee, vec(rho @ delta_eg), quadrature.phase, norm)


def correlation_expansion(
    params: AtomParams,
    transition: Transition,
    kind: CorrelationKind,
    quadrature: Optional[Quadrature] = None,
) -> Tuple[Expansion, complex, Normalization]:
    """Exponential expansion of an unnormalized correlation numerator."""
    solution = solve(params)
    term = regression_term(solution, transition, kind, quadrature)
    return term.expansion(solution), term.weight, term.normalization


def _series(
    params: AtomParams,
    transition: Transition,
    kind: CorrelationKind,
    grid: DelayGrid,
    quadrature: Optional[Quadrature] = None,
) -> CorrelationSeries:
    solution = solve(params)
    term = regression_term(solution, transition, kind, quadrature)
    values = term.numerator(solution, grid.values) / term.normalization.denominator
    logger.debug(
        "%s on %s transition: %d delays up to %g",
        kind.value,
        transition.value,
        grid.n_points,
        grid.tau_max,
    )
    return CorrelationSeries(
        grid=grid,
        values=values,
        kind=kind,
        transition=transition,
        quadrature=quadrature,
        normalization=term.normalization,
    )


def _check_origin(series: CorrelationSeries, tolerance: float) -> None:
    if abs(series.values[0]) >= tolerance:
        raise NonPhysicalState(
            f"{series.kind.value} at zero delay is {series.values[0]:.3e}, expected 0"
        )


def g2(params: AtomParams, transition: Transition, grid: DelayGrid) -> CorrelationSeries:
    """g2_ee(tau) = <sigma_eg(0) sigma_eg(tau) sigma_ge(tau) sigma_ge(0)> / alpha_ee^2."""
    series = _series(params, transition, CorrelationKind.G2, grid)
    _check_origin(series, G2_ZERO_TOLERANCE)
    return series


def aic_positive(
    params: AtomParams, transition: Transition, quadrature: Quadrature, grid: DelayGrid
) -> CorrelationSeries:
    """h_phi(tau >= 0) = <sigma_eg(0) sigma_phi(tau) sigma_ge(0)> / (alpha_ee alpha_phi)."""
    series = _series(params, transition, CorrelationKind.AIC_POSITIVE, grid, quadrature)
    _check_origin(series, AIC_ZERO_TOLERANCE)
    return series


def aic_negative(
    params: AtomParams, transition: Transition, quadrature: Quadrature, grid: DelayGrid
) -> CorrelationSeries:
    """h_phi(tau <= 0) as a function of |tau|.

    Re[e^{-i phi} <sigma_eg(0) sigma_ee(|tau|)>] / (alpha_ee alpha_phi), the
    intensity detection following the quadrature measurement.
    """
    series = _series(params, transition, CorrelationKind.AIC_NEGATIVE, grid, quadrature)
    _check_origin(series, AIC_ZERO_TOLERANCE)
    return series


def aic_negative_fluctuation(
    params: AtomParams, transition: Transition, quadrature: Quadrature, grid: DelayGrid
) -> CorrelationSeries:
    """Second-order fluctuation form of h(tau <= 0) - 1, evaluated on fluctuation operators."""
    solution = solve(params)
    term = negative_fluctuation_term(solution, transition, quadrature)
    values = term.numerator(solution, grid.values) / term.normalization.denominator
    return CorrelationSeries(
        grid=grid,
        values=values,
        kind=CorrelationKind.AIC2,
        transition=transition,
        quadrature=quadrature,
        normalization=term.normalization,
    )


def aic_decomposition(
    params: AtomParams, transition: Transition, quadrature: Quadrature, grid: DelayGrid
) -> Tuple[CorrelationSeries, CorrelationSeries]:
    """Second- and third-order parts of h(tau >= 0) = 1 + h2 + h3."""
    h2 = _series(params, transition, CorrelationKind.AIC2, grid, quadrature)
    h3 = _series(params, transition, CorrelationKind.AIC3, grid, quadrature)
    return h2, h3


class CorrelationCalculator:
    """Stateless entry points for correlation functions."""

    g2 = staticmethod(g2)
    aic_positive = staticmethod(aic_positive)
    aic_negative = staticmethod(aic_negative)
    aic_negative_fluctuation = staticmethod(aic_negative_fluctuation)
    aic_decomposition = staticmethod(aic_decomposition)
    correlation_expansion = staticmethod(correlation_expansion)
