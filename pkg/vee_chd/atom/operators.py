"""Operators on the {g, s, w} basis and their column-stacked superoperators.

vec(X) stacks the columns of X, so vec(A X B) = (B^T kron A) vec(X) and
Tr[A X] = vec(A^T) . vec(X).
"""

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from vee_chd.models import (
    HERMITIAN_TOLERANCE,
    POSITIVITY_SLACK,
    TRACE_TOLERANCE,
    Level,
    Transition,
)

DIM = len(Level)
_IDENTITY = np.eye(DIM, dtype=complex)


def sigma(j: Level, k: Level) -> np.ndarray:
    """|j><k| as a 3x3 complex matrix."""
    matrix = np.zeros((DIM, DIM), dtype=complex)
    matrix[int(j), int(k)] = 1.0
    return matrix


def raising(transition: Transition) -> np.ndarray:
    """sigma_eg = |e><g|, read-only."""
    return AtomicOp.transition_op(transition.level, Level.G).matrix


def lowering(transition: Transition) -> np.ndarray:
    """sigma_ge = |g><e|, read-only."""
    return AtomicOp.transition_op(Level.G, transition.level).matrix


def projector(transition: Transition) -> np.ndarray:
    """sigma_ee, the intensity operator of a transition."""
    level = transition.level
    return AtomicOp.transition_op(level, level).matrix


def quadrature_operator(transition: Transition, phi: float) -> np.ndarray:
    """sigma_phi = (sigma_eg e^{-i phi} + sigma_ge e^{i phi}) / 2."""
    phase = np.exp(-1j * phi)
    return 0.5 * (raising(transition) * phase + lowering(transition) * np.conj(phase))


def fluctuation(operator: np.ndarray, mean: complex) -> np.ndarray:
    """Delta sigma = sigma - <sigma> I."""
    return operator - mean * _IDENTITY


def vec(matrix: np.ndarray) -> np.ndarray:
    return np.asarray(matrix, dtype=complex).reshape(-1, order="F")


def unvec(vector: np.ndarray) -> np.ndarray:
    return np.asarray(vector, dtype=complex).reshape((DIM, DIM), order="F")


def left(a: np.ndarray) -> np.ndarray:
    """Superoperator of X -> A X."""
    return np.kron(_IDENTITY, a)


def right(b: np.ndarray) -> np.ndarray:
    """Superoperator of X -> X B."""
    return np.kron(b.T, _IDENTITY)


def sandwich(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator of X -> A X B."""
    return np.kron(b.T, a)


def commutator(h: np.ndarray) -> np.ndarray:
    """Superoperator of X -> [H, X]."""
    return left(h) - right(h)


def dissipator(jump: np.ndarray) -> np.ndarray:
    """Superoperator of X -> C X C^dag - {C^dag C, X}/2."""
    jump_dag = jump.conj().T
    rate = jump_dag @ jump
    return sandwich(jump, jump_dag) - 0.5 * (left(rate) + right(rate))


def trace_functional(observable: np.ndarray) -> np.ndarray:
    """Row vector r with r . vec(X) = Tr[A X]."""
    return vec(np.asarray(observable).T)


def expectation(observable: np.ndarray, state: np.ndarray) -> complex:
    """Tr[A X] for a matrix X."""
    return complex(np.trace(observable @ state))


class AtomicOp(BaseModel):
    """A 3x3 operator in the {g, s, w} basis with an optional symbolic tag."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    label: Optional[str] = None

    @field_validator("matrix", mode="before")
    @classmethod
    def _as_matrix(cls, value):
        matrix = np.array(value, dtype=complex)
        if matrix.shape != (DIM, DIM):
            raise ValueError(f"expected a {DIM}x{DIM} matrix, got shape {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise ValueError("operator entries must be finite")
        matrix.flags.writeable = False
        return matrix

    @classmethod
    def transition_op(cls, j: Level, k: Level) -> "AtomicOp":
        return cls(matrix=sigma(j, k), label=f"sigma_{j.name.lower()}{k.name.lower()}")

    def dag(self) -> "AtomicOp":
        label = f"{self.label}^dag" if self.label else None
        return AtomicOp(matrix=self.matrix.conj().T, label=label)


class DensityOp(BaseModel):
    """Hermitian, unit-trace, positive semidefinite 3x3 operator."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def _as_matrix(cls, value):
        matrix = np.array(value, dtype=complex)
        if matrix.shape != (DIM, DIM):
            raise ValueError(f"expected a {DIM}x{DIM} matrix, got shape {matrix.shape}")
        matrix.flags.writeable = False
        return matrix

    @model_validator(mode="after")
    def _check_physical(self) -> "DensityOp":
        matrix = self.matrix
        if not np.all(np.isfinite(matrix)):
            raise ValueError("density operator entries must be finite")
        if np.max(np.abs(matrix - matrix.conj().T)) > HERMITIAN_TOLERANCE:
            raise ValueError("density operator is not Hermitian")
        if abs(np.trace(matrix) - 1.0) > TRACE_TOLERANCE:
            raise ValueError(f"density operator trace {np.trace(matrix):.12g} != 1")
        lowest = float(np.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T)).min())
        if lowest < -POSITIVITY_SLACK:
            raise ValueError(f"density operator has negative eigenvalue {lowest:.3e}")
        return self

    @classmethod
    def ground(cls) -> "DensityOp":
        return cls(matrix=sigma(Level.G, Level.G))

    def population(self, level: Level) -> float:
        return float(self.matrix[int(level), int(level)].real)

    def vector(self) -> np.ndarray:
        return vec(self.matrix)
