"""Lindblad generator of the driven V-type atom, its steady state and propagator."""

import logging
import math
from functools import lru_cache
from typing import NamedTuple, Optional, Tuple

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from scipy.integrate import solve_ivp

from vee_chd.atom.operators import (
    DIM,
    DensityOp,
    commutator,
    dissipator,
    lowering,
    projector,
    raising,
    trace_functional,
    unvec,
    vec,
)
from vee_chd.errors import (
    DegenerateNullSpace,
    IllConditionedEigenbasis,
    NonPhysicalState,
    ParameterError,
)
from vee_chd.models import AtomParams, Level, Transition

logger = logging.getLogger(__name__)

NULL_TOLERANCE = 1e-8
TRACE_FLOOR = 1e-12
EIGENBASIS_CONDITION_LIMIT = 1e12
STEADY_RESIDUAL_TOLERANCE = 1e-8


class Liouvillian(BaseModel):
    """9x9 generator acting on column-stacked density operators.

    The eigendecomposition is computed once at construction, ordered by
    decreasing real part, so the instance can be shared between threads.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    right_inverse: Optional[np.ndarray] = None
    condition: float

    @field_validator("matrix", "eigenvalues", "right_vectors", "right_inverse", mode="before")
    @classmethod
    def _freeze(cls, value):
        if value is None:
            return None
        array = np.array(value, dtype=complex)
        array.flags.writeable = False
        return array

    @model_validator(mode="after")
    def _check_shape(self) -> "Liouvillian":
        size = DIM * DIM
        if self.matrix.shape != (size, size):
            raise ValueError(f"generator must be {size}x{size}, got {self.matrix.shape}")
        return self

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "Liouvillian":
        matrix = np.asarray(matrix, dtype=complex)
        if not np.all(np.isfinite(matrix)):
            raise ParameterError("generator entries must be finite")
        eigenvalues, vectors = scipy.linalg.eig(matrix)
        order = np.argsort(-eigenvalues.real, kind="stable")
        eigenvalues, vectors = eigenvalues[order], vectors[:, order]
        try:
            inverse = scipy.linalg.inv(vectors)
            condition = float(np.linalg.cond(vectors))
        except (scipy.linalg.LinAlgError, ValueError):
            inverse, condition = None, math.inf
        return cls(
            matrix=matrix,
            eigenvalues=eigenvalues,
            right_vectors=vectors,
            right_inverse=inverse,
            condition=condition,
        )

    def eigenbasis(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(eigenvalues, R, R^-1); raises when R is too close to singular."""
        if self.right_inverse is None or self.condition > EIGENBASIS_CONDITION_LIMIT:
            raise IllConditionedEigenbasis(self.condition, EIGENBASIS_CONDITION_LIMIT)
        return self.eigenvalues, self.right_vectors, self.right_inverse

    def null_index(self) -> int:
        return int(np.argmin(np.abs(self.eigenvalues)))

    def trace_residual(self) -> float:
        """max |<<I| L|| ; zero for a trace-preserving generator."""
        identity_row = vec(np.eye(DIM))
        return float(np.max(np.abs(identity_row @ self.matrix)))

    def spectral_gap(self) -> float:
        """-Re of the slowest decaying nonzero eigenvalue."""
        rest = np.delete(self.eigenvalues, self.null_index())
        return float(-rest.real.max())


class SteadyState(BaseModel):
    """Stationary density operator with its expectation table alpha_jk = <sigma_jk>."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rho: DensityOp
    alpha: np.ndarray

    @field_validator("alpha", mode="before")
    @classmethod
    def _freeze(cls, value):
        array = np.array(value, dtype=complex)
        array.flags.writeable = False
        return array

    @model_validator(mode="after")
    def _check_table(self) -> "SteadyState":
        if np.max(np.abs(self.alpha - self.alpha.conj().T)) > 1e-10:
            raise ValueError("alpha_jk must equal conj(alpha_kj)")
        if abs(np.trace(self.alpha) - 1.0) > 1e-10:
            raise ValueError("stationary populations must sum to one")
        return self

    def moment(self, j: Level, k: Level) -> complex:
        return complex(self.alpha[int(j), int(k)])

    def population(self, transition: Transition) -> float:
        level = transition.level
        return float(self.alpha[int(level), int(level)].real)

    def coherence(self, transition: Transition) -> complex:
        """alpha_eg = <sigma_eg>."""
        return self.moment(transition.level, Level.G)

    def quadrature_mean(self, transition: Transition, phi: float) -> float:
        """alpha_phi = Re[alpha_eg e^{-i phi}]."""
        return float((self.coherence(transition) * np.exp(-1j * phi)).real)


class AtomSolution(NamedTuple):
    params: AtomParams
    liouvillian: Liouvillian
    steady: SteadyState


class Expansion(NamedTuple):
    """f(t) = sum_k c_k exp(lambda_k t) for a fixed observable and initial operator."""

    eigenvalues: np.ndarray
    coefficients: np.ndarray

    def evaluate(self, times: np.ndarray) -> np.ndarray:
        times = np.asarray(times, dtype=float)
        return np.exp(np.multiply.outer(times, self.eigenvalues)) @ self.coefficients

    def stationary_index(self) -> int:
        return int(np.argmin(np.abs(self.eigenvalues)))

    def stationary_value(self) -> complex:
        return complex(self.coefficients[self.stationary_index()])

    def transient(self) -> "Expansion":
        keep = np.arange(self.eigenvalues.size) != self.stationary_index()
        return Expansion(self.eigenvalues[keep], self.coefficients[keep])

    def cosine_transform(self, omega: np.ndarray) -> np.ndarray:
        """int_0^inf f(t) cos(omega t) dt for a transient expansion."""
        lam = self.eigenvalues[np.newaxis, :]
        w2 = np.asarray(omega, dtype=float)[:, np.newaxis] ** 2
        return (-lam / (lam ** 2 + w2)) @ self.coefficients

    def tail_bound(self, time: float) -> float:
        """Upper bound on |f(t)| from the term magnitudes."""
        return float(np.sum(np.abs(self.coefficients) * np.exp(self.eigenvalues.real * time)))


def build_liouvillian(params: AtomParams) -> Liouvillian:
    """Generator of the rotating-frame master equation.

    Coherent drive -i(Omega_e/2)[sigma_eg + sigma_ge, rho], detuning
    -i Delta_e [sigma_ee, rho] and independent decay
    (gamma_e/2)(2 sigma_ge rho sigma_eg - sigma_ee rho - rho sigma_ee)
    for e in {s, w}.
    """
    dumped = params.model_dump()
    bad = [name for name, value in dumped.items() if not math.isfinite(value)]
    if bad:
        raise ParameterError(f"non-finite parameters: {', '.join(bad)}")

    hamiltonian = np.zeros((DIM, DIM), dtype=complex)
    generator = np.zeros((DIM * DIM, DIM * DIM), dtype=complex)
    for transition in Transition:
        gamma, omega, delta = params.rates(transition)
        hamiltonian += 0.5 * omega * (raising(transition) + lowering(transition))
        hamiltonian += delta * projector(transition)
        generator += gamma * dissipator(lowering(transition))
    generator += -1j * commutator(hamiltonian)
    return Liouvillian.from_matrix(generator)


def steady_state(liouvillian: Liouvillian) -> SteadyState:
    """Null eigenvector of the generator, trace-normalized and symmetrized."""
    magnitudes = np.abs(liouvillian.eigenvalues)
    order = np.argsort(magnitudes)
    if magnitudes[order[0]] >= NULL_TOLERANCE:
        raise NonPhysicalState(
            f"generator has no stationary state (smallest |lambda| = {magnitudes[order[0]]:.3e})"
        )
    if magnitudes[order[1]] < NULL_TOLERANCE:
        raise DegenerateNullSpace(
            f"eigenvalues {liouvillian.eigenvalues[order[0]]:.3e} and "
            f"{liouvillian.eigenvalues[order[1]]:.3e} both vanish"
        )

    candidate = unvec(liouvillian.right_vectors[:, order[0]])
    norm = np.trace(candidate)
    if abs(norm) < TRACE_FLOOR:
        raise NonPhysicalState(f"null vector has trace {abs(norm):.3e}")
    rho = candidate / norm
    rho = 0.5 * (rho + rho.conj().T)

    residual = float(np.max(np.abs(liouvillian.matrix @ vec(rho))))
    if residual > STEADY_RESIDUAL_TOLERANCE:
        raise NonPhysicalState(f"steady-state residual {residual:.3e}")
    logger.debug("steady state populations %s (residual %.2e)", np.diag(rho).real, residual)
    try:
        density = DensityOp(matrix=rho)
    except ValueError as exc:
        raise NonPhysicalState(str(exc)) from exc
    # alpha_jk = Tr[|j><k| rho] = <k|rho|j>
    return SteadyState(rho=density, alpha=rho.T)


@lru_cache(maxsize=512)
def solve(params: AtomParams) -> AtomSolution:
    """Generator and steady state for a parameter set (memoized)."""
    liouvillian = build_liouvillian(params)
    return AtomSolution(params, liouvillian, steady_state(liouvillian))


def evolve(liouvillian: Liouvillian, x0: np.ndarray, t: float) -> np.ndarray:
    """e^{L t} x0 through the eigendecomposition, expm when it is ill-conditioned."""
    if not t >= 0:
        raise ParameterError(f"propagation time must be non-negative, got {t}")
    x0 = np.asarray(x0, dtype=complex)
    if t == 0:
        return x0.copy()
    try:
        eigenvalues, vectors, inverse = liouvillian.eigenbasis()
    except IllConditionedEigenbasis as exc:
        logger.warning("%s; propagating with scipy.linalg.expm", exc)
        return scipy.linalg.expm(liouvillian.matrix * t) @ x0
    return vectors @ (np.exp(eigenvalues * t) * (inverse @ x0))


def expansion(liouvillian: Liouvillian, observable: np.ndarray, x0: np.ndarray) -> Expansion:
    """Tr[A e^{L t} x0] written as a sum of exponentials."""
    eigenvalues, vectors, inverse = liouvillian.eigenbasis()
    weights = trace_functional(observable) @ vectors
    return Expansion(eigenvalues.copy(), weights * (inverse @ np.asarray(x0, dtype=complex)))


def expectation_series(
    liouvillian: Liouvillian, observable: np.ndarray, x0: np.ndarray, times: np.ndarray
) -> np.ndarray:
    """Tr[A e^{L t} x0] on a grid of non-negative times."""
    times = np.asarray(times, dtype=float)
    if times.size and times.min() < 0:
        raise ParameterError("delays must be non-negative")
    x0 = np.asarray(x0, dtype=complex)
    row = trace_functional(observable)
    try:
        values = expansion(liouvillian, observable, x0).evaluate(times)
    except IllConditionedEigenbasis as exc:
        logger.warning("%s; evaluating %d delays with scipy.linalg.expm", exc, times.size)
        values = np.array([row @ scipy.linalg.expm(liouvillian.matrix * t) @ x0 for t in times])
    # exact at the origin
    values[times == 0] = row @ x0
    return values


def integrate_master_equation(
    liouvillian: Liouvillian,
    x0: np.ndarray,
    times: np.ndarray,
    rtol: float = 1e-11,
    atol: float = 1e-13,
) -> np.ndarray:
    """Time-stepping reference solution, one row of vec(X(t)) per requested time."""
    times = np.asarray(times, dtype=float)
    matrix = np.asarray(liouvillian.matrix)
    if times.max() == 0:
        return np.tile(np.asarray(x0, dtype=complex), (times.size, 1))
    result = solve_ivp(
        lambda _t, y: matrix @ y,
        (0.0, float(times.max())),
        np.asarray(x0, dtype=complex),
        method="DOP853",
        t_eval=times,
        rtol=rtol,
        atol=atol,
    )
    if not result.success:
        raise NonPhysicalState(f"reference integration failed: {result.message}")
    return result.y.T


def two_level_g2(tau: np.ndarray, omega: float, gamma: float) -> np.ndarray:
    """Resonant two-level-atom intensity correlation in closed form."""
    tau = np.asarray(tau, dtype=float)
    d = np.sqrt(complex((0.25 * gamma) ** 2 - omega ** 2))
    if abs(d) < 1e-12:
        envelope = 1.0 + 0.75 * gamma * tau
    else:
        envelope = np.cosh(d * tau) + (0.75 * gamma / d) * np.sinh(d * tau)
    return np.real(1.0 - np.exp(-0.75 * gamma * tau) * envelope)


def two_level_population(omega: float, gamma: float) -> float:
    """Resonant two-level excited population (Omega^2/4)/(gamma^2/4 + Omega^2/2)."""
    return (omega ** 2 / 4.0) / (gamma ** 2 / 4.0 + omega ** 2 / 2.0)


class AtomModel:
    """Stateless entry points for the atom model."""

    build_liouvillian = staticmethod(build_liouvillian)
    steady_state = staticmethod(steady_state)
    evolve = staticmethod(evolve)
    solve = staticmethod(solve)
