"""Scenario definitions, figure presets, configuration files and scenario execution.

A scenario names one observable evaluated for one parameter set, optionally
along a one-parameter sweep and for several labelled curves.  Execution fans
the independent evaluations out over a thread pool and assembles the results
in a fixed order, so the output does not depend on completion order.
"""

import asyncio
import logging
import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from vee_chd import __version__
from vee_chd.analysis import classical_violations
from vee_chd.correlations import aic_decomposition, aic_negative, aic_positive, g2
from vee_chd.errors import NonPhysicalState, ScenarioError, VeeChdError
from vee_chd.models import AtomParams, DelayGrid, FrequencyGrid, Quadrature, Transition
from vee_chd.spectra import (
    noise_functionals,
    spectrum_negative_side,
    spectrum_positive_side,
    variance,
)

logger = logging.getLogger(__name__)

WORKERS_ENV = "VEE_CHD_WORKERS"

PARAM_KEYS = ("gamma_w", "omega_s", "omega_w", "delta_s", "delta_w")
SWEEPABLE = PARAM_KEYS + ("phi",)
SWEEP_KEYS = ("sweep_param", "sweep_min", "sweep_max", "sweep_steps")
CONFIG_KEYS = (
    ("name",)
    + PARAM_KEYS
    + ("transition", "phi", "observable", "tau_max", "n_tau", "omega_max", "n_omega")
    + SWEEP_KEYS
    + ("curves", "violation_flags")
)

Column = Tuple[str, Transition, np.ndarray]


class Observable(str, Enum):
    G2 = "g2"
    AIC = "aic"
    AIC_DECOMPOSITION = "aic_decomposition"
    SPECTRUM = "spectrum"
    VARIANCE_SCAN = "variance_scan"
    NOISE_SCAN = "noise_scan"

    @property
    def is_scan(self) -> bool:
        return self in (Observable.VARIANCE_SCAN, Observable.NOISE_SCAN)

    @property
    def needs_quadrature(self) -> bool:
        return self is not Observable.G2


class Sweep(BaseModel):
    """Uniform sweep of one parameter, endpoints included."""

    model_config = ConfigDict(frozen=True)

    param: str
    minimum: float = Field(..., allow_inf_nan=False)
    maximum: float = Field(..., allow_inf_nan=False)
    steps: int = Field(..., ge=2)

    @field_validator("param")
    @classmethod
    def _sweepable(cls, value: str) -> str:
        if value not in SWEEPABLE:
            raise ValueError(f"cannot sweep {value!r}; choose one of {', '.join(SWEEPABLE)}")
        return value

    @model_validator(mode="after")
    def _positive_length(self) -> "Sweep":
        if not self.maximum > self.minimum:
            raise ValueError(
                f"sweep range [{self.minimum:g}, {self.maximum:g}] must have positive length"
            )
        return self

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.minimum, self.maximum, self.steps)


class Curve(BaseModel):
    """A labelled set of parameter overrides drawn as one curve of a figure."""

    model_config = ConfigDict(frozen=True)

    label: str = Field(..., pattern=r"^[A-Za-z0-9]+$")
    overrides: Dict[str, float] = Field(default_factory=dict)

    @field_validator("overrides")
    @classmethod
    def _known_keys(cls, value: Dict[str, float]) -> Dict[str, float]:
        unknown = sorted(set(value) - set(SWEEPABLE))
        if unknown:
            raise ValueError(f"curves may override only {', '.join(SWEEPABLE)}; got {unknown}")
        return value


class Scenario(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str = Field(..., min_length=1)
    description: str = ""
    params: AtomParams
    observable: Observable
    transition: Optional[Transition] = None
    quadrature: Optional[Quadrature] = None
    tau_max: Optional[float] = Field(None, gt=0, allow_inf_nan=False)
    n_tau: int = Field(2000, ge=2)
    omega_max: float = Field(5.0, gt=0, allow_inf_nan=False)
    n_omega: int = Field(2001, ge=2)
    sweep: Optional[Sweep] = None
    curves: Tuple[Curve, ...] = ()
    violation_flags: bool = False

    @model_validator(mode="after")
    def _consistent(self) -> "Scenario":
        if self.observable.is_scan and self.sweep is None:
            raise ValueError(f"{self.observable.value} needs a sweep")
        if not self.observable.is_scan and self.sweep is not None:
            raise ValueError(f"{self.observable.value} does not take a sweep")
        if self.observable.needs_quadrature and self.quadrature is None:
            raise ValueError(f"{self.observable.value} needs a local-oscillator phase (phi)")
        if self.violation_flags and self.observable is not Observable.AIC:
            raise ValueError("violation flags are only emitted for the aic observable")
        labels = [curve.label for curve in self.curves]
        if len(set(labels)) != len(labels):
            raise ValueError(f"curve labels must be unique, got {labels}")
        return self

    def transitions(self) -> Tuple[Transition, ...]:
        if self.transition is None:
            return tuple(Transition)
        return (self.transition,)

    def delay_grid(self) -> DelayGrid:
        if self.tau_max is not None:
            return DelayGrid(tau_max=self.tau_max, n_points=self.n_tau)
        slowest = Transition.WEAK if Transition.WEAK in self.transitions() else Transition.STRONG
        return DelayGrid(tau_max=DelayGrid.default_for(slowest).tau_max, n_points=self.n_tau)

    def frequency_grid(self) -> FrequencyGrid:
        return FrequencyGrid(omega_max=self.omega_max, n_points=self.n_omega)

    def variants(self) -> List[Tuple[Optional[str], AtomParams, Optional[Quadrature]]]:
        """(label, params, quadrature) per curve; a single unlabelled variant without curves."""
        if not self.curves:
            return [(None, self.params, self.quadrature)]
        return [
            (curve.label, *apply_changes(self.params, self.quadrature, curve.overrides))
            for curve in self.curves
        ]


class OutputTable(BaseModel):
    """Rectangular numeric table with a provenance block and optional row labels."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    headers: Tuple[str, ...]
    rows: np.ndarray
    provenance: Tuple[Tuple[str, str], ...] = ()
    row_labels: Optional[Tuple[str, ...]] = None
    label_header: str = "curve"

    @field_validator("rows", mode="before")
    @classmethod
    def _as_matrix(cls, value):
        rows = np.array(value, dtype=float)
        if rows.ndim != 2:
            raise ValueError(f"rows must form a matrix, got {rows.ndim} dimensions")
        rows.flags.writeable = False
        return rows

    @model_validator(mode="after")
    def _rectangular(self) -> "OutputTable":
        if len(set(self.headers)) != len(self.headers):
            raise ValueError(f"duplicate column headers in {self.headers}")
        if self.rows.shape[1] != len(self.headers):
            raise ValueError(
                f"{self.rows.shape[1]} values per row for {len(self.headers)} headers"
            )
        if not np.all(np.isfinite(self.rows)):
            raise ValueError("output values must be finite")
        if self.row_labels is not None and len(self.row_labels) != self.rows.shape[0]:
            raise ValueError("one row label per row is required")
        return self

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.headers.index(name)]

    def render(self) -> str:
        lines = [f"# {key}: {value}" for key, value in self.provenance]
        headers = list(self.headers)
        if self.row_labels is not None:
            headers.insert(0, self.label_header)
        lines.append(",".join(headers))
        for index, row in enumerate(self.rows):
            cells = [format(float(value), ".11e") for value in row]
            if self.row_labels is not None:
                cells.insert(0, self.row_labels[index])
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


# --- configuration ---------------------------------------------------------

_PI_EXPRESSION = re.compile(
    r"^(?P<sign>[-+])?(?:(?P<num>\d+(?:\.\d*)?)\*)?pi(?:/(?P<den>\d+(?:\.\d*)?))?$"
)


def parse_phi(text: Union[str, float]) -> float:
    """Phase from a float or a pi expression such as ``pi/2`` or ``-3*pi/4``."""
    if not isinstance(text, str):
        return float(text)
    compact = text.replace(" ", "").lower()
    match = _PI_EXPRESSION.match(compact)
    if match:
        denominator = float(match.group("den") or 1.0)
        if denominator == 0:
            raise ScenarioError(f"invalid phase {text!r}")
        value = math.pi * float(match.group("num") or 1.0) / denominator
        return -value if match.group("sign") == "-" else value
    try:
        return float(compact)
    except ValueError:
        raise ScenarioError(f"cannot read phase {text!r}; use a number or e.g. pi/2") from None


def _number(key: str, text: str) -> float:
    if key == "phi":
        return parse_phi(text)
    try:
        return float(text)
    except ValueError:
        raise ScenarioError(f"curve override {key}={text!r} is not a number") from None


def parse_curves(text: str) -> Tuple[Curve, ...]:
    """``i: omega_s=0.1; gamma_w=0.01 | ii: omega_s=0.5`` into labelled curves."""
    curves = []
    for chunk in filter(None, (part.strip() for part in text.split("|"))):
        label, sep, body = chunk.partition(":")
        if not sep:
            raise ScenarioError(f"curve {chunk!r} lacks a 'label:' prefix")
        overrides: Dict[str, float] = {}
        for item in filter(None, (part.strip() for part in body.split(";"))):
            key, eq, value = item.partition("=")
            if not eq:
                raise ScenarioError(f"curve override {item!r} is not key=value")
            overrides[key.strip()] = _number(key.strip(), value.strip())
        try:
            curves.append(Curve(label=label.strip(), overrides=overrides))
        except ValidationError as exc:
            raise ScenarioError(_summarize(exc)) from exc
    return tuple(curves)


def format_curves(curves: Sequence[Curve]) -> str:
    return " | ".join(
        f"{curve.label}: " + "; ".join(f"{key}={value:g}" for key, value in curve.overrides.items())
        for curve in curves
    )


def read_settings(path: Union[str, Path]) -> Dict[str, str]:
    """key=value pairs of a scenario file; ``#`` starts a comment."""
    settings: Dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ScenarioError(f"{path}:{number}: expected key=value, got {raw.strip()!r}")
        key = key.strip()
        if key in settings:
            raise ScenarioError(f"{path}:{number}: duplicate key {key!r}")
        settings[key] = value.strip()
    return settings


def _summarize(exc: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(part) for part in error['loc']) or 'scenario'}: {error['msg']}"
        for error in exc.errors()
    )


def scenario_from_settings(settings: Mapping[str, Any], description: str = "") -> Scenario:
    """Validated scenario from flat configuration values (strings or typed values)."""
    name = settings.get("name")
    if "gamma_s" in settings:
        raise ScenarioError("gamma_s is the unit of all rates and fixed at 1", name)
    unknown = sorted(set(settings) - set(CONFIG_KEYS))
    if unknown:
        raise ScenarioError(f"unknown configuration keys: {', '.join(unknown)}", name)
    if not name:
        raise ScenarioError("scenario needs a name")

    present = [key for key in SWEEP_KEYS if settings.get(key) not in (None, "")]
    if present and len(present) != len(SWEEP_KEYS):
        missing = sorted(set(SWEEP_KEYS) - set(present))
        raise ScenarioError(f"incomplete sweep, missing {', '.join(missing)}", name)

    transition = settings.get("transition")
    phi = settings.get("phi")
    curves = settings.get("curves") or ()
    try:
        return Scenario(
            name=name,
            description=description,
            params=AtomParams(
                **{key: settings[key] for key in PARAM_KEYS if settings.get(key) is not None}
            ),
            observable=settings.get("observable"),
            transition=None if transition in (None, "both") else transition,
            quadrature=None if phi in (None, "") else Quadrature(phi=parse_phi(phi)),
            tau_max=settings.get("tau_max"),
            n_tau=settings.get("n_tau") or 2000,
            omega_max=settings.get("omega_max") or 5.0,
            n_omega=settings.get("n_omega") or 2001,
            sweep=Sweep(
                param=settings["sweep_param"],
                minimum=settings["sweep_min"],
                maximum=settings["sweep_max"],
                steps=settings["sweep_steps"],
            )
            if present
            else None,
            curves=parse_curves(curves) if isinstance(curves, str) else tuple(curves),
            violation_flags=settings.get("violation_flags") or False,
        )
    except ValidationError as exc:
        raise ScenarioError(_summarize(exc), name) from exc


def scenario_settings(scenario: Scenario) -> Dict[str, Any]:
    """Flat configuration values of a scenario; inverse of scenario_from_settings."""
    flat: Dict[str, Any] = {"name": scenario.name}
    flat.update({key: getattr(scenario.params, key) for key in PARAM_KEYS})
    flat.update(
        transition=scenario.transition.value if scenario.transition else "both",
        phi=scenario.quadrature.phi if scenario.quadrature else None,
        observable=scenario.observable.value,
        tau_max=scenario.tau_max,
        n_tau=scenario.n_tau,
        omega_max=scenario.omega_max,
        n_omega=scenario.n_omega,
        curves=scenario.curves,
        violation_flags=scenario.violation_flags,
    )
    if scenario.sweep is not None:
        flat.update(
            sweep_param=scenario.sweep.param,
            sweep_min=scenario.sweep.minimum,
            sweep_max=scenario.sweep.maximum,
            sweep_steps=scenario.sweep.steps,
        )
    return flat


def apply_overrides(scenario: Scenario, overrides: Mapping[str, Any]) -> Scenario:
    """Copy of ``scenario`` with configuration keys replaced; ``None`` values are ignored."""
    merged = scenario_settings(scenario)
    merged.update({key: value for key, value in overrides.items() if value is not None})
    return scenario_from_settings(merged, description=scenario.description)


def load_scenario_file(path: Union[str, Path]) -> Scenario:
    settings = read_settings(path)
    settings.setdefault("name", Path(path).stem)
    return scenario_from_settings(settings, description=f"loaded from {path}")


def apply_changes(
    params: AtomParams, quadrature: Optional[Quadrature], changes: Mapping[str, float]
) -> Tuple[AtomParams, Optional[Quadrature]]:
    changes = dict(changes)
    if "phi" in changes:
        quadrature = Quadrature(phi=changes.pop("phi"))
    if changes:
        params = params.updated(**changes)
    return params, quadrature


# --- presets ---------------------------------------------------------------

_BASE = dict(gamma_w=0.1, omega_w=0.1)


def _preset(name: str, description: str, **settings: Any) -> Scenario:
    return scenario_from_settings({"name": name, **settings}, description=description)


PRESETS: Dict[str, Scenario] = {
    scenario.name: scenario
    for scenario in (
        _preset(
            "fig2a",
            "intensity correlations of both transitions, moderate strong drive",
            observable="g2", omega_s=0.5, tau_max=40.0, **_BASE,
        ),
        _preset(
            "fig2b",
            "intensity correlations of both transitions, strong drive",
            observable="g2", omega_s=3.5, tau_max=40.0, **_BASE,
        ),
        _preset(
            "fig4",
            "AIC of the weak transition and its decomposition, saturated strong transition",
            observable="aic_decomposition", transition="weak", phi=math.pi / 2,
            omega_s=0.5, tau_max=100.0, **_BASE,
        ),
        _preset(
            "fig5",
            "AIC of the weak transition and its decomposition, strongly driven strong transition",
            observable="aic_decomposition", transition="weak", phi=math.pi / 2,
            omega_s=3.5, tau_max=100.0, **_BASE,
        ),
        _preset(
            "fig6",
            "AIC spectra of the weak transition, saturated strong transition",
            observable="spectrum", transition="weak", phi=math.pi / 2, omega_s=0.5, **_BASE,
        ),
        _preset(
            "fig7",
            "AIC spectra of the weak transition, strongly driven strong transition",
            observable="spectrum", transition="weak", phi=math.pi / 2, omega_s=3.5, **_BASE,
        ),
        _preset(
            "fig8a",
            "variance of the strong-transition fluorescence against Omega_s",
            observable="variance_scan", transition="strong", phi=math.pi / 2,
            gamma_w=0.01, omega_s=1.0, omega_w=0.05,
            sweep_param="omega_s", sweep_min=0.01, sweep_max=2.0, sweep_steps=200,
            curves="i: gamma_w=0.01; omega_w=0.05 | ii: gamma_w=0.01; omega_w=0.1"
            " | iii: gamma_w=0.1; omega_w=0.1",
        ),
        _preset(
            "fig8b",
            "variance of the weak-transition fluorescence against Omega_w",
            observable="variance_scan", transition="weak", phi=math.pi / 2,
            gamma_w=0.1, omega_s=0.1, omega_w=0.1,
            sweep_param="omega_w", sweep_min=0.005, sweep_max=0.3, sweep_steps=60,
            curves="i: omega_s=0.1 | ii: omega_s=0.2 | iii: omega_s=0.5",
        ),
        _preset(
            "fig9",
            "zero-delay AIC noise of the weak transition against Omega_w",
            observable="noise_scan", transition="weak", phi=math.pi / 2,
            gamma_w=0.1, omega_s=0.1, omega_w=0.1,
            sweep_param="omega_w", sweep_min=0.005, sweep_max=0.3, sweep_steps=60,
            curves="i: omega_s=0.1 | ii: omega_s=0.5 | iii: omega_s=0.9",
        ),
    )
}


def get_preset(name: str) -> Scenario:
    try:
        return PRESETS[name]
    except KeyError:
        raise ScenarioError(f"unknown preset; choose one of {', '.join(PRESETS)}", name) from None


# --- execution -------------------------------------------------------------


def resolve_workers(workers: Optional[int] = None) -> int:
    """Explicit count, else $VEE_CHD_WORKERS, else the CPU count."""
    if workers is None:
        raw = os.environ.get(WORKERS_ENV)
        if raw is None:
            return os.cpu_count() or 1
        try:
            workers = int(raw)
        except ValueError:
            raise ScenarioError(f"{WORKERS_ENV}={raw!r} is not an integer") from None
    if workers < 1:
        raise ScenarioError(f"worker count must be positive, got {workers}")
    return workers


def _evaluate(
    scenario: Scenario, params: AtomParams, quadrature: Optional[Quadrature]
) -> Tuple[str, np.ndarray, List[Column]]:
    """Axis name, axis values and named columns of one curve of a non-scan observable."""
    observable = scenario.observable
    columns: List[Column] = []

    if observable is Observable.SPECTRUM:
        grid = scenario.frequency_grid()
        for transition in scenario.transitions():
            pos = spectrum_positive_side(params, transition, quadrature, grid)
            neg = spectrum_negative_side(params, transition, quadrature, grid)
            columns += [
                ("S_pos", transition, pos.total),
                ("S_neg", transition, neg.total),
                ("S2", transition, pos.s2),
                ("S3", transition, pos.s3),
            ]
        return "omega", grid.values, columns

    grid = scenario.delay_grid()
    tau = grid.values
    if observable is Observable.G2:
        for transition in scenario.transitions():
            columns.append(("g2", transition, g2(params, transition, grid).values))
        return "tau", tau, columns

    if observable is Observable.AIC_DECOMPOSITION:
        for transition in scenario.transitions():
            pos = aic_positive(params, transition, quadrature, grid)
            neg = aic_negative(params, transition, quadrature, grid)
            h2, h3 = aic_decomposition(params, transition, quadrature, grid)
            columns += [
                ("h_pos", transition, pos.values),
                ("h_neg", transition, neg.values),
                ("h2", transition, h2.values),
                ("h3", transition, h3.values),
                ("one_plus_h2", transition, 1.0 + h2.values),
            ]
        return "tau", tau, columns

    # two-sided AIC, tau = 0 emitted once from the positive branch
    mirrored = np.concatenate([-tau[:0:-1], tau])
    for transition in scenario.transitions():
        pos = aic_positive(params, transition, quadrature, grid)
        neg = aic_negative(params, transition, quadrature, grid)
        columns.append(("h", transition, np.concatenate([neg.values[:0:-1], pos.values])))
        if scenario.violation_flags:
            flags = [_violation_flags(tau, classical_violations(s)) for s in (neg, pos)]
            for index, base in enumerate(("bound1_violated", "bound2_violated")):
                negative, positive = flags[0][index], flags[1][index]
                columns.append((base, transition, np.concatenate([negative[:0:-1], positive])))
    return "tau", mirrored, columns


def _violation_flags(tau: np.ndarray, report) -> Tuple[np.ndarray, np.ndarray]:
    bound1 = np.isin(tau, report.bound1_lo_violated) | np.isin(tau, report.bound1_hi_violated)
    bound2 = np.isin(tau, report.bound2_violated)
    return bound1.astype(float), bound2.astype(float)


def _scan_point(
    scenario: Scenario, params: AtomParams, quadrature: Quadrature
) -> List[Tuple[str, Transition, float]]:
    cells = []
    for transition in scenario.transitions():
        if scenario.observable is Observable.VARIANCE_SCAN:
            cells.append(("V", transition, variance(params, transition, quadrature)))
            continue
        report = noise_functionals(params, transition, quadrature)
        cells += [
            ("H2", transition, report.h2_0),
            ("H3", transition, report.h3_0),
            ("HN", transition, report.hN_0),
            ("V", transition, report.variance),
        ]
    return cells


def _column_name(base: str, transition: Transition, scenario: Scenario) -> str:
    return f"{base}_{transition.tag}" if len(scenario.transitions()) > 1 else base


def provenance(scenario: Scenario, timestamp: bool = False) -> Tuple[Tuple[str, str], ...]:
    entries = [
        ("scenario", scenario.name),
        ("version", f"vee-chd {__version__}"),
        ("observable", scenario.observable.value),
        ("transition", scenario.transition.value if scenario.transition else "both"),
        ("params", scenario.params.model_dump_json()),
    ]
    if scenario.quadrature is not None:
        entries.append(("phi", repr(scenario.quadrature.phi)))
    if scenario.observable is Observable.SPECTRUM:
        span = f"[{-scenario.omega_max!r}, {scenario.omega_max!r}] x {scenario.n_omega}"
        entries.append(("omega_grid", span))
    elif not scenario.observable.is_scan:
        grid = scenario.delay_grid()
        entries.append(("tau_grid", f"[0, {grid.tau_max!r}] x {grid.n_points}"))
    if scenario.sweep is not None:
        sweep = scenario.sweep
        entries.append(
            ("sweep", f"{sweep.param} in [{sweep.minimum!r}, {sweep.maximum!r}] x {sweep.steps}")
        )
    if scenario.curves:
        entries.append(("curves", format_curves(scenario.curves)))
    if timestamp:
        entries.append(("generated", datetime.now(timezone.utc).isoformat(timespec="seconds")))
    return tuple(entries)


def _plan_scan(scenario: Scenario) -> List[Tuple[Optional[str], float, AtomParams, Quadrature]]:
    sweep = scenario.sweep
    plan = []
    try:
        for label, params, quadrature in scenario.variants():
            for value in sweep.values:
                point, quad = apply_changes(params, quadrature, {sweep.param: float(value)})
                plan.append((label, float(value), point, quad))
    except ValidationError as exc:
        raise ScenarioError(_summarize(exc), scenario.name) from exc
    return plan


async def run_scenario_async(
    scenario: Scenario, workers: Optional[int] = None, timestamp: bool = False
) -> OutputTable:
    """Evaluate a scenario, one worker task per curve or sweep point."""
    count = resolve_workers(workers)
    if scenario.observable.is_scan:
        plan = _plan_scan(scenario)
    else:
        try:
            variants = scenario.variants()
        except ValidationError as exc:
            raise ScenarioError(_summarize(exc), scenario.name) from exc
    logger.info("running %s (%s) on %d workers", scenario.name, scenario.observable.value, count)

    loop = asyncio.get_running_loop()
    try:
        with ThreadPoolExecutor(max_workers=count) as pool:
            if scenario.observable.is_scan:
                points = await asyncio.gather(
                    *(
                        loop.run_in_executor(pool, _scan_point, scenario, p, q)
                        for _, _, p, q in plan
                    )
                )
            else:
                curves = await asyncio.gather(
                    *(loop.run_in_executor(pool, _evaluate, scenario, p, q) for _, p, q in variants)
                )
    except VeeChdError as exc:
        logger.error("scenario %s failed: %s", scenario.name, exc)
        raise exc.attach(scenario.name)
    except ValidationError as exc:
        # a result record rejected by its own validators
        logger.error("scenario %s produced an invalid result: %s", scenario.name, exc)
        raise NonPhysicalState(_summarize(exc)).attach(scenario.name) from exc

    labels: List[str] = []
    if scenario.observable.is_scan:
        headers = [scenario.sweep.param] + [
            _column_name(base, transition, scenario) for base, transition, _ in points[0]
        ]
        rows = [
            [value] + [cell for _, _, cell in cells]
            for (_, value, _, _), cells in zip(plan, points)
        ]
        labels = [label for label, _, _, _ in plan if label is not None]
    else:
        axis, _, columns = curves[0]
        headers = [axis] + [
            _column_name(base, transition, scenario) for base, transition, _ in columns
        ]
        blocks = []
        for (label, _, _), (_, axis_values, columns) in zip(variants, curves):
            blocks.append(np.column_stack([axis_values] + [values for _, _, values in columns]))
            if label is not None:
                labels += [label] * axis_values.size
        rows = np.vstack(blocks)

    try:
        table = OutputTable(
            headers=tuple(headers),
            rows=rows,
            provenance=provenance(scenario, timestamp),
            row_labels=tuple(labels) if scenario.curves else None,
        )
    except ValidationError as exc:
        raise NonPhysicalState(_summarize(exc)).attach(scenario.name) from exc
    logger.info("finished %s: %d rows", scenario.name, table.rows.shape[0])
    return table


def run_scenario(
    scenario: Scenario, workers: Optional[int] = None, timestamp: bool = False
) -> OutputTable:
    return asyncio.run(run_scenario_async(scenario, workers=workers, timestamp=timestamp))
