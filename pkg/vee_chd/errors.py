"""Exception hierarchy for the simulator."""

from typing import Optional


class VeeChdError(Exception):
    """Base class for every error raised by vee_chd."""

    scenario: Optional[str] = None

    def attach(self, scenario: str) -> "VeeChdError":
        """Record the scenario during which the error surfaced."""
        if self.scenario is None:
            self.scenario = scenario
        return self


class ParameterError(VeeChdError, ValueError):
    """Physical parameters or grids outside their admissible range."""


class DegenerateNullSpace(VeeChdError):
    """More than one eigenvalue of the generator lies at zero."""


class NonPhysicalState(VeeChdError):
    """A computed state or moment violates a structural identity."""


class IllConditionedEigenbasis(VeeChdError):
    """The right-eigenvector matrix of the generator is numerically singular."""

    def __init__(self, condition: float, limit: float):
        super().__init__(
            f"eigenbasis condition number {condition:.3e} exceeds {limit:.1e}"
        )
        self.condition = condition
        self.limit = limit


class UnpopulatedTransition(VeeChdError):
    """The observed excited level has no stationary population."""


class DegenerateQuadratureMean(VeeChdError):
    """The stationary quadrature mean vanishes, so the AIC normalization is undefined."""


class TailNotConverged(VeeChdError):
    """A truncated delay integral still carries a non-negligible tail."""


class WrongSeriesKind(VeeChdError):
    """A correlation series of the wrong kind was passed to an analysis."""


class GridMismatch(VeeChdError):
    """Two series that must share a grid, transition and quadrature do not."""


class ScenarioError(VeeChdError, ValueError):
    """Invalid scenario definition, carrying the scenario name when known."""

    def __init__(self, message: str, scenario: Optional[str] = None):
        prefix = f"[{scenario}] " if scenario else ""
        super().__init__(prefix + message)
        self.scenario = scenario
