"""Scenario schema, loader and cross-component validation."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Tuple, Union

from pydantic import Field, model_validator

from core.aero import RotorParams, load_cp_table
from core.config import ConfigError, StrictModel, load_yaml_file, load_yaml_text, pick_angle, validate_tree
from core.drivetrain import GearboxParams, InertiaParams
from core.grid import LineSegment, LineSegmentParams, ShuntParams
from core.machine import MachineParams
from windfield.core import WindFieldSpec
from windfield.schema import WindConfig

from .layout import known_columns

logger = logging.getLogger(__name__)

PhaseValue = Union[float, List[float]]


class ScenarioError(ConfigError):
    """Aggregated scenario validation failure."""


# --- schema -----------------------------------------------------------------


class RotorModel(StrictModel):
    radius_m: float = Field(gt=0)
    air_density_kgm3: float = Field(default=1.225, gt=0)
    cp_table: Optional[List[Tuple[float, float]]] = None
    cp_table_csv: Optional[str] = None

    @model_validator(mode="after")
    def _one_table(self) -> "RotorModel":
        if (self.cp_table is None) == (self.cp_table_csv is None):
            raise ValueError("give exactly one of cp_table or cp_table_csv")
        return self


class TurbineModel(StrictModel):
    x_m: float = 0.0
    y_m: float = 0.0
    elevation_rad: Optional[float] = None
    elevation_deg: Optional[float] = None
    rotor: RotorModel

    @model_validator(mode="after")
    def _one_angle(self) -> "TurbineModel":
        if self.elevation_rad is not None and self.elevation_deg is not None:
            raise ValueError("give elevation_rad or elevation_deg, not both")
        return self


class GeneratorInertiaModel(StrictModel):
    theta_kgm2: float = Field(gt=0)
    kf_nms_per_rad: float = Field(default=0.0, ge=0)
    applied_torque_nm: float = 0.0


class GearboxModel(StrictModel):
    c_nm_per_rad: float = Field(ge=0)
    d_nms_per_rad: float = Field(default=0.0, ge=0)
    n: float = 1.0

    @model_validator(mode="after")
    def _nonzero_ratio(self) -> "GearboxModel":
        if self.n == 0:
            raise ValueError("gear ratio n must be non-zero")
        return self


class DrivetrainModel(StrictModel):
    theta_kgm2: float = Field(gt=0)
    kf_nms_per_rad: float = Field(default=0.0, ge=0)
    applied_torque_nm: float = 0.0
    initial_omega_rad_per_s: float = 0.0
    generator: Optional[GeneratorInertiaModel] = None
    gearbox: Optional[GearboxModel] = None


class MachineModel(StrictModel):
    rs_ohm: float = Field(gt=0)
    rr_ohm: float = Field(gt=0)
    ls_h: float = Field(gt=0)
    lr_h: float = Field(gt=0)
    lm_h: float = Field(gt=0)
    pole_pairs: int = Field(default=2, ge=1)
    initial_slip: float = Field(default=0.0, ge=-1.0, le=1.0)


class SegmentModel(StrictModel):
    r0_ohm_per_m: float = Field(ge=0)
    r1_ohm_per_m: float = Field(gt=0)
    l0_h_per_m: float = Field(gt=0)
    l1_h_per_m: float = Field(gt=0)
    ce_f_per_m: float = Field(default=0.0, ge=0)
    cl_f_per_m: float = Field(default=0.0, ge=0)
    ge_s_per_m: float = Field(default=0.0, ge=0)
    gl_s_per_m: float = Field(default=0.0, ge=0)
    length_m: float = Field(gt=0)


class SourceEventModel(StrictModel):
    at_s: float = Field(ge=0)
    voltage_scale: float = Field(default=1.0, ge=0)
    frequency_hz: Optional[float] = Field(default=None, gt=0)


class SourceModel(StrictModel):
    voltage_v: float = Field(ge=0)
    frequency_hz: float = Field(default=50.0, gt=0)
    events: List[SourceEventModel] = Field(default_factory=list)

    @model_validator(mode="after")
    def _ordered(self) -> "SourceModel":
        times = [event.at_s for event in self.events]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("source events must have strictly increasing at_s")
        return self


class LoadModel(StrictModel):
    conductance_s: PhaseValue = 0.0
    capacitance_f: PhaseValue = 0.0


class GridModel(StrictModel):
    segment: SegmentModel
    source: SourceModel
    load: LoadModel = Field(default_factory=LoadModel)


class IntegratorModel(StrictModel):
    method: Literal["rk4", "heun", "euler"] = "rk4"
    dt_s: float = Field(gt=0)
    duration_s: float = Field(gt=0)

    @model_validator(mode="after")
    def _covers_one_step(self) -> "IntegratorModel":
        if self.duration_s < self.dt_s:
            raise ValueError(f"duration_s {self.duration_s} is shorter than dt_s {self.dt_s}")
        return self


class OutputsModel(StrictModel):
    columns: Optional[List[str]] = None


class ScenarioModel(StrictModel):
    mode: Literal["transient", "rms"] = "transient"
    integrator: IntegratorModel
    outputs: OutputsModel = Field(default_factory=OutputsModel)
    seed: int = Field(default=0, ge=0, lt=2**64)
    wind: Optional[WindConfig] = None
    turbine: Optional[TurbineModel] = None
    drivetrain: Optional[DrivetrainModel] = None
    machine: Optional[MachineModel] = None
    grid: Optional[GridModel] = None


# --- runtime scenario -------------------------------------------------------


@dataclass(frozen=True)
class SourceEvent:
    at_s: float
    voltage_scale: float
    frequency_hz: float


@dataclass(frozen=True)
class SourceSpec:
    """Balanced grid source with a piecewise-constant voltage/frequency schedule.

    ``voltage_v`` is line-to-line RMS; the phase is the integral of the
    scheduled angular frequency, so the waveform stays continuous.
    """

    voltage_v: float
    frequency_hz: float
    events: Tuple[SourceEvent, ...] = ()
    _starts: Tuple[float, ...] = field(init=False, repr=False, compare=False)
    _omegas: Tuple[float, ...] = field(init=False, repr=False, compare=False)
    _scales: Tuple[float, ...] = field(init=False, repr=False, compare=False)
    _thetas: Tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        starts = [0.0]
        omegas = [2.0 * math.pi * self.frequency_hz]
        scales = [1.0]
        for event in self.events:
            if event.at_s == 0.0:
                omegas[0] = 2.0 * math.pi * event.frequency_hz
                scales[0] = event.voltage_scale
                continue
            starts.append(event.at_s)
            omegas.append(2.0 * math.pi * event.frequency_hz)
            scales.append(event.voltage_scale)
        thetas = [0.0]
        for k in range(1, len(starts)):
            thetas.append(thetas[-1] + omegas[k - 1] * (starts[k] - starts[k - 1]))
        object.__setattr__(self, "_starts", tuple(starts))
        object.__setattr__(self, "_omegas", tuple(omegas))
        object.__setattr__(self, "_scales", tuple(scales))
        object.__setattr__(self, "_thetas", tuple(thetas))

    @property
    def phase_peak(self) -> float:
        return math.sqrt(2.0 / 3.0) * self.voltage_v

    @property
    def omega_nominal(self) -> float:
        return 2.0 * math.pi * self.frequency_hz

    def _segment(self, t: float) -> int:
        k = 0
        while k + 1 < len(self._starts) and t >= self._starts[k + 1]:
            k += 1
        return k

    def omega(self, t: float) -> float:
        return self._omegas[self._segment(t)]

    def amplitude(self, t: float) -> float:
        return self.phase_peak * self._scales[self._segment(t)]

    def theta(self, t: float) -> float:
        k = self._segment(t)
        return self._thetas[k] + self._omegas[k] * (t - self._starts[k])

    def phasor(self, t: float) -> complex:
        """Phase-a peak phasor in the frame rotating at nominal frequency."""
        return self.amplitude(t) * complex(math.cos(self.theta(t) - self.omega_nominal * t),
                                           math.sin(self.theta(t) - self.omega_nominal * t))


@dataclass(frozen=True)
class TurbineSpec:
    position_xy: Tuple[float, float]
    elevation_rad: float
    rotor: RotorParams


@dataclass(frozen=True)
class DrivetrainSpec:
    rotor: InertiaParams
    applied_rotor_nm: float = 0.0
    initial_omega: float = 0.0
    generator: Optional[InertiaParams] = None
    applied_generator_nm: float = 0.0
    gearbox: Optional[GearboxParams] = None

    @property
    def two_mass(self) -> bool:
        return self.gearbox is not None


@dataclass(frozen=True)
class MachineSpec:
    params: MachineParams
    initial_slip: float = 0.0


@dataclass(frozen=True)
class GridSpec:
    segment: LineSegmentParams
    source: SourceSpec
    shunt: ShuntParams = field(default_factory=ShuntParams)


@dataclass(frozen=True)
class Scenario:
    mode: str
    method: str
    dt_s: float
    duration_s: float
    seed: int = 0
    columns: Optional[Tuple[str, ...]] = None
    wind: Optional[WindFieldSpec] = None
    turbine: Optional[TurbineSpec] = None
    drivetrain: Optional[DrivetrainSpec] = None
    machine: Optional[MachineSpec] = None
    grid: Optional[GridSpec] = None
    name: str = "scenario"

    @property
    def n_steps(self) -> int:
        return int(math.floor(self.duration_s / self.dt_s + 1e-9))


# --- building ---------------------------------------------------------------


def _build(model: ScenarioModel, base_dir: Optional[Path], name: str) -> Tuple[Optional[Scenario], List[str]]:
    errors: List[str] = []
    parts: Dict[str, Any] = {}

    if model.wind is not None:
        try:
            parts["wind"] = model.wind.to_spec(model.seed)
        except ValueError as exc:
            errors.append(f"wind: {exc}")

    if model.turbine is not None:
        rotor = model.turbine.rotor
        try:
            if rotor.cp_table_csv is not None:
                csv_path = Path(rotor.cp_table_csv)
                if not csv_path.is_absolute() and base_dir is not None:
                    csv_path = base_dir / csv_path
                table = load_cp_table(csv_path)
            else:
                table = tuple(rotor.cp_table or ())
            parts["turbine"] = TurbineSpec(
                (model.turbine.x_m, model.turbine.y_m),
                pick_angle(model.turbine.elevation_rad, model.turbine.elevation_deg),
                RotorParams(rotor.radius_m, rotor.air_density_kgm3, table),
            )
        except (OSError, ValueError) as exc:
            errors.append(f"turbine.rotor: {exc}")

    dt = model.drivetrain
    if dt is not None and (dt.generator is None) == (dt.gearbox is None):
        try:
            parts["drivetrain"] = DrivetrainSpec(
                rotor=InertiaParams(dt.theta_kgm2, dt.kf_nms_per_rad),
                applied_rotor_nm=dt.applied_torque_nm,
                initial_omega=dt.initial_omega_rad_per_s,
                generator=InertiaParams(dt.generator.theta_kgm2, dt.generator.kf_nms_per_rad) if dt.generator else None,
                applied_generator_nm=dt.generator.applied_torque_nm if dt.generator else 0.0,
                gearbox=GearboxParams(dt.gearbox.c_nm_per_rad, dt.gearbox.d_nms_per_rad, dt.gearbox.n)
                if dt.gearbox
                else None,
            )
        except ValueError as exc:
            errors.append(f"drivetrain: {exc}")

    if model.machine is not None:
        m = model.machine
        try:
            params = MachineParams(m.rs_ohm, m.rr_ohm, m.ls_h, m.lr_h, m.lm_h, m.pole_pairs)
            parts["machine"] = MachineSpec(params, m.initial_slip)
        except ValueError as exc:
            errors.append(f"machine: {exc}")

    if model.grid is not None:
        g = model.grid
        try:
            segment = LineSegmentParams(**g.segment.model_dump())
            shunt = ShuntParams(g.load.conductance_s, g.load.capacitance_f)
            events = tuple(
                SourceEvent(e.at_s, e.voltage_scale, e.frequency_hz or g.source.frequency_hz) for e in g.source.events
            )
            parts["grid"] = GridSpec(segment, SourceSpec(g.source.voltage_v, g.source.frequency_hz, events), shunt)
            if model.mode == "transient":
                LineSegment(segment, shunt).c_inv  # raises when the node has no usable capacitance
        except ValueError as exc:
            errors.append(f"grid: {exc}")

    if errors:
        return None, errors
    scenario = Scenario(
        mode=model.mode,
        method=model.integrator.method,
        dt_s=model.integrator.dt_s,
        duration_s=model.integrator.duration_s,
        seed=model.seed,
        columns=tuple(model.outputs.columns) if model.outputs.columns is not None else None,
        name=name,
        **parts,
    )
    return scenario, []


def _number(tree: Mapping[str, Any], *path: str) -> Optional[float]:
    node: Any = tree
    for key in path:
        if not isinstance(node, Mapping) or key not in node:
            return None
        node = node[key]
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        return None
    return float(node) if math.isfinite(node) else None


def _section(tree: Mapping[str, Any], key: str) -> bool:
    return tree.get(key) is not None


def integration_horizon(dt_s: float, duration_s: float) -> float:
    """Latest time any fixed-step method evaluates the right-hand side."""
    return math.floor(duration_s / dt_s + 1e-9) * dt_s


def _cross_checks(tree: Mapping[str, Any]) -> List[str]:
    """Checks spanning several sections, made on the raw tree."""
    errors: List[str] = []
    if _section(tree, "machine") and not _section(tree, "grid"):
        errors.append("machine: requires a grid section")
    if _section(tree, "machine") and not _section(tree, "drivetrain"):
        errors.append("machine: requires a drivetrain section")
    if _section(tree, "turbine") and not _section(tree, "wind"):
        errors.append("turbine: requires a wind section")
    if _section(tree, "turbine") and not _section(tree, "drivetrain"):
        errors.append("turbine: requires a drivetrain section")
    if not _section(tree, "drivetrain") and not _section(tree, "grid"):
        errors.append("<document>: nothing to simulate, give at least a drivetrain or a grid section")

    drivetrain = tree.get("drivetrain")
    if isinstance(drivetrain, Mapping) and (drivetrain.get("generator") is None) != (drivetrain.get("gearbox") is None):
        errors.append("drivetrain: generator inertia and gearbox must be given together")

    wind_duration = _number(tree, "wind", "duration_s")
    sample_rate = _number(tree, "wind", "sample_rate_hz")
    dt = _number(tree, "integrator", "dt_s")
    duration = _number(tree, "integrator", "duration_s")
    if None not in (wind_duration, sample_rate, dt, duration) and sample_rate > 0 and dt > 0:
        samples = int(round(wind_duration * sample_rate))
        covered = samples / sample_rate
        horizon = integration_horizon(dt, duration)
        if covered < horizon * (1.0 - 1e-9):
            errors.append(
                f"wind.duration_s: the synthesized series covers {covered:.6g} s "
                f"({samples} samples at {sample_rate:g} Hz), "
                f"the integration reaches {horizon:.6g} s"
            )

    outputs = tree.get("outputs")
    columns = outputs.get("columns") if isinstance(outputs, Mapping) else None
    if isinstance(columns, list):
        unknown = sorted({str(c) for c in columns} - set(known_columns()))
        if unknown:
            errors.append(f"outputs.columns: unknown column(s) {', '.join(unknown)}")
    return errors


def scenario_from_tree(tree: Dict[str, Any], base_dir: Optional[Path] = None, name: str = "scenario") -> Scenario:
    model, errors = validate_tree(ScenarioModel, tree)
    cross = _cross_checks(tree)
    if model is None or cross:
        raise ScenarioError(errors + cross)
    scenario, errors = _build(model, base_dir, name)
    if scenario is None:
        raise ScenarioError(errors)
    logger.info("Loaded scenario '%s' (%s mode, %d steps)", name, scenario.mode, scenario.n_steps)
    return scenario


def load_scenario(config_text: str, base_dir: Optional[Path] = None, name: str = "scenario") -> Scenario:
    """Parse and validate a scenario document; every error is reported at once."""
    try:
        tree = load_yaml_text(config_text)
    except ConfigError as exc:
        raise ScenarioError(exc.errors) from exc
    return scenario_from_tree(tree, base_dir, name)


def load_scenario_file(path: Path | str) -> Scenario:
    cfg_path = Path(path)
    try:
        tree = load_yaml_file(cfg_path)
    except ConfigError as exc:
        raise ScenarioError(exc.errors) from exc
    return scenario_from_tree(tree, cfg_path.parent, cfg_path.stem)


__all__ = [
    "ScenarioError",
    "ScenarioModel",
    "Scenario",
    "SourceSpec",
    "SourceEvent",
    "TurbineSpec",
    "DrivetrainSpec",
    "MachineSpec",
    "GridSpec",
    "integration_horizon",
    "load_scenario",
    "load_scenario_file",
    "scenario_from_tree",
]
