"""Domain records shared by the simulator modules.

All rates, Rabi frequencies and detunings are expressed in units of the
strong-transition decay rate gamma_s; delays are in 1/gamma_s.
"""

import logging
import math
from enum import Enum, IntEnum
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

logger = logging.getLogger(__name__)

# Tolerances shared by record validators
HERMITIAN_TOLERANCE = 1e-10
TRACE_TOLERANCE = 1e-10
POSITIVITY_SLACK = 1e-9
CLOSURE_TOLERANCE = 1e-8
NOISE_IDENTITY_TOLERANCE = 1e-10


def _frozen_array(value, dtype=float) -> np.ndarray:
    array = np.array(value, dtype=dtype)
    array.flags.writeable = False
    return array


class Level(IntEnum):
    """Basis states |g>, |s>, |w> in their fixed matrix ordering."""

    G = 0
    S = 1
    W = 2


class Transition(str, Enum):
    """Dipole transition observed by the detectors."""

    STRONG = "strong"
    WEAK = "weak"

    @property
    def level(self) -> Level:
        return Level.S if self is Transition.STRONG else Level.W

    @property
    def tag(self) -> str:
        """Two-letter population tag used in column names (ss / ww)."""
        return "ss" if self is Transition.STRONG else "ww"


class AtomParams(BaseModel):
    """Rates and frequencies of the bichromatically driven V-type atom."""

    model_config = ConfigDict(frozen=True)

    gamma_s: float = Field(1.0, gt=0, allow_inf_nan=False)
    gamma_w: float = Field(..., gt=0, allow_inf_nan=False)
    omega_s: float = Field(..., ge=0, allow_inf_nan=False)
    omega_w: float = Field(..., ge=0, allow_inf_nan=False)
    delta_s: float = Field(0.0, allow_inf_nan=False)
    delta_w: float = Field(0.0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _warn_on_relabeling(self) -> "AtomParams":
        if self.gamma_w > self.gamma_s:
            logger.warning(
                "gamma_w=%g exceeds gamma_s=%g; the 'weak' label now names the faster transition",
                self.gamma_w,
                self.gamma_s,
            )
        return self

    def rates(self, transition: Transition) -> Tuple[float, float, float]:
        """Return (gamma, omega, delta) of one transition."""
        if transition is Transition.STRONG:
            return self.gamma_s, self.omega_s, self.delta_s
        return self.gamma_w, self.omega_w, self.delta_w

    def updated(self, **changes: float) -> "AtomParams":
        """Validated copy with some fields replaced."""
        return AtomParams(**{**self.model_dump(), **changes})

    def scaled_drive(self, factor: float) -> "AtomParams":
        return self.updated(omega_s=self.omega_s * factor, omega_w=self.omega_w * factor)


class Quadrature(BaseModel):
    """Local-oscillator phase selecting sigma_phi = (sigma_eg e^{-i phi} + h.c.)/2."""

    model_config = ConfigDict(frozen=True)

    phi: float = Field(..., allow_inf_nan=False)

    @classmethod
    def in_phase(cls) -> "Quadrature":
        return cls(phi=0.0)

    @classmethod
    def out_of_phase(cls) -> "Quadrature":
        return cls(phi=math.pi / 2)

    @property
    def phase(self) -> complex:
        """e^{-i phi}."""
        return complex(np.exp(-1j * self.phi))


class DelayGrid(BaseModel):
    """Uniform delay grid on [0, tau_max]."""

    model_config = ConfigDict(frozen=True)

    tau_max: float = Field(..., gt=0, allow_inf_nan=False)
    n_points: int = Field(2000, ge=2)

    @property
    def values(self) -> np.ndarray:
        return np.linspace(0.0, self.tau_max, self.n_points)

    @classmethod
    def default_for(cls, transition: Transition) -> "DelayGrid":
        return cls(tau_max=20.0 if transition is Transition.STRONG else 100.0)


class FrequencyGrid(BaseModel):
    """Uniform frequency grid symmetric about zero."""

    model_config = ConfigDict(frozen=True)

    omega_max: float = Field(5.0, gt=0, allow_inf_nan=False)
    n_points: int = Field(2001, ge=2)

    @property
    def values(self) -> np.ndarray:
        return np.linspace(-self.omega_max, self.omega_max, self.n_points)


class CorrelationKind(str, Enum):
    G2 = "g2"
    AIC_POSITIVE = "aic_positive"
    AIC_NEGATIVE = "aic_negative"
    AIC2 = "aic2"
    AIC3 = "aic3"

    @property
    def is_aic(self) -> bool:
        return self in (CorrelationKind.AIC_POSITIVE, CorrelationKind.AIC_NEGATIVE)


class Normalization(BaseModel):
    """Denominators used to normalize a correlation series."""

    model_config = ConfigDict(frozen=True)

    alpha_ee: float
    alpha_phi: Optional[float] = None

    @property
    def denominator(self) -> float:
        if self.alpha_phi is None:
            return self.alpha_ee ** 2
        return self.alpha_ee * self.alpha_phi


class CorrelationSeries(BaseModel):
    """Real correlation values on a delay grid.

    Negative-delay AIC series are stored as functions of |tau|.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: DelayGrid
    values: np.ndarray
    kind: CorrelationKind
    transition: Transition
    quadrature: Optional[Quadrature] = None
    normalization: Normalization

    @field_validator("values", mode="before")
    @classmethod
    def _as_real_array(cls, value):
        return _frozen_array(value)

    @model_validator(mode="after")
    def _check_values(self) -> "CorrelationSeries":
        if self.values.shape != (self.grid.n_points,):
            raise ValueError(
                f"{self.values.shape[0]} values for a grid of {self.grid.n_points} points"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("correlation values must be finite")
        if self.kind is CorrelationKind.G2 and self.values.min() < -1e-10:
            raise ValueError(f"negative photon-pair probability {self.values.min():.3e}")
        return self

    @property
    def tau(self) -> np.ndarray:
        return self.grid.values

    def unnormalized(self) -> np.ndarray:
        return self.values * self.normalization.denominator

    def excess(self) -> np.ndarray:
        """Deviation from the uncorrelated value (h - 1, g2 - 1, or the fluctuation term)."""
        if self.kind in (CorrelationKind.AIC2, CorrelationKind.AIC3):
            return self.values.copy()
        return self.values - 1.0


class SpectrumSide(str, Enum):
    POSITIVE_DELAY = "positive"
    NEGATIVE_DELAY = "negative"


class SpectrumSeries(BaseModel):
    """One-sided cosine spectrum of an AIC with its second/third-order split."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: FrequencyGrid
    total: np.ndarray
    s2: np.ndarray
    s3: np.ndarray
    side: SpectrumSide
    transition: Transition
    quadrature: Quadrature
    efficiency_eta: float = Field(1.0, gt=0, le=1)

    @field_validator("total", "s2", "s3", mode="before")
    @classmethod
    def _as_real_array(cls, value):
        return _frozen_array(value)

    @model_validator(mode="after")
    def _check_closure(self) -> "SpectrumSeries":
        for name in ("total", "s2", "s3"):
            array = getattr(self, name)
            if array.shape != (self.grid.n_points,):
                raise ValueError(f"{name} does not match the frequency grid")
            if not np.all(np.isfinite(array)):
                raise ValueError(f"{name} must be finite")
        scale = max(1.0, float(np.max(np.abs(self.total))))
        residual = float(np.max(np.abs(self.total - self.s2 - self.s3)))
        if residual > CLOSURE_TOLERANCE * scale:
            raise ValueError(f"total != s2 + s3 (residual {residual:.3e})")
        return self

    @property
    def omega(self) -> np.ndarray:
        return self.grid.values

    def squeezing_spectrum(self) -> np.ndarray:
        """Measured spectrum of squeezing, eta * S^(2)."""
        return self.efficiency_eta * self.s2


class NoiseReport(BaseModel):
    """Zero-delay noise functionals and the normally ordered variance."""

    model_config = ConfigDict(frozen=True)

    h2_0: float
    h3_0: float
    hN_0: float
    variance: float

    @model_validator(mode="after")
    def _check_identity(self) -> "NoiseReport":
        residual = abs(self.hN_0 - self.h2_0 - self.h3_0)
        if residual > NOISE_IDENTITY_TOLERANCE:
            raise ValueError(f"H^(N) != H^(2) + H^(3) (residual {residual:.3e})")
        return self


class ZeroDelayMoments(BaseModel):
    """Stationary fluctuation moments at zero delay for one transition.

    ``residual`` is the largest deviation between the closed forms and the
    direct trace evaluation against the stationary density operator.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    transition: Transition
    m_eg_ge: complex
    m_eg_eg: complex
    m_eg_ee: complex
    m_eg_ge_ge: complex
    m_eg_eg_ge: complex
    residual: float = Field(0.0, ge=0)

    @field_validator("m_eg_ge", "m_eg_eg", "m_eg_ee", "m_eg_ge_ge", "m_eg_eg_ge", mode="before")
    @classmethod
    def _as_complex(cls, value):
        return complex(value)

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.m_eg_ge, self.m_eg_eg, self.m_eg_ee, self.m_eg_ge_ge, self.m_eg_eg_ge]
        )


class ViolationReport(BaseModel):
    """Grid delays breaking the classical AIC inequalities."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    bound1_lo_violated: np.ndarray
    bound1_hi_violated: np.ndarray
    bound2_violated: np.ndarray
    max_excess: float = Field(..., ge=0)

    @field_validator("bound1_lo_violated", "bound1_hi_violated", "bound2_violated", mode="before")
    @classmethod
    def _as_delays(cls, value):
        return _frozen_array(value)

    @property
    def any_violation(self) -> bool:
        arrays = (self.bound1_lo_violated, self.bound1_hi_violated, self.bound2_violated)
        return any(array.size for array in arrays)


class AsymmetryReport(BaseModel):
    """Distance between the positive- and negative-delay branches of an AIC."""

    model_config = ConfigDict(frozen=True)

    sup_diff: float = Field(..., ge=0)
    l2_diff: float = Field(..., ge=0)
    threshold: float = Field(1e-3, gt=0)
    symmetric_flag: bool
