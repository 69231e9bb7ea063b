"""Time integration of a scenario, file artefacts and parameter sweeps."""
from __future__ import annotations

import copy
import itertools
import logging
import re
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import yaml
from joblib import Parallel, delayed

from core.config import load_yaml_file
from windfield.core import WindSeries
from windfield.synthesis import generate

from .integrators import get_stepper
from .layout import AUDIT_BLOCK
from .output import EnergyAudit, TimeSeriesOutput, write_output, write_summary
from .report import write_report
from .scenario import Scenario, ScenarioError, scenario_from_tree
from .system import System

logger = logging.getLogger(__name__)


class NumericalAbort(RuntimeError):
    """A state component became non-finite during integration."""

    def __init__(self, step: int, time_s: float, component: str) -> None:
        self.step = step
        self.time = time_s
        self.component = component
        super().__init__(f"Non-finite state in '{component}' at step {step} (t={time_s:.6g} s)")


def build_system(scenario: Scenario, env: Optional[WindSeries] = None) -> System:
    if env is None and scenario.wind is not None and scenario.turbine is not None:
        env = generate(scenario.wind)
    return System(scenario, env)


def _selected_columns(scenario: Scenario, system: System) -> Tuple[str, ...]:
    available = system.available_columns()
    if scenario.columns is None:
        return available
    missing = [name for name in scenario.columns if name not in available]
    if missing:
        raise ScenarioError(
            [f"outputs.columns: '{name}' needs a component that is not configured" for name in missing]
        )
    return tuple(scenario.columns)


def march(system: System, x0: np.ndarray, t0: float, n_steps: int, dt: float, method: str = "rk4") -> np.ndarray:
    """Advance ``n_steps`` fixed steps without recording."""
    stepper = get_stepper(method)
    x = x0
    for k in range(1, n_steps + 1):
        x = stepper(system.derivative, t0 + (k - 1) * dt, x, dt)
        if not np.all(np.isfinite(x)):
            raise NumericalAbort(k, t0 + k * dt, system.layout.first_non_finite(x))
    return x


def integrate(scenario: Scenario, env: Optional[WindSeries] = None, run_id: Optional[str] = None) -> TimeSeriesOutput:
    """Fixed-step integration of ``scenario``; records the selected columns at every step."""
    started = time.perf_counter()
    system = build_system(scenario, env)
    columns = _selected_columns(scenario, system)
    stepper = get_stepper(scenario.method)
    dt = scenario.dt_s
    n_steps = scenario.n_steps

    x = system.initial_state()
    stored_start = asdict(system.stored_energy(x))
    times = np.arange(n_steps + 1) * dt
    table = np.empty((n_steps + 1, len(columns)))

    def _record(row: int, t: float, state: np.ndarray) -> None:
        if not columns:
            return
        signals = system.observe(t, state)
        table[row] = [signals[name] for name in columns]

    _record(0, 0.0, x)
    logger.info("Integrating '%s': %d steps of %.3g s (%s, %s)", scenario.name, n_steps, dt, scenario.method, scenario.mode)
    for k in range(1, n_steps + 1):
        x = stepper(system.derivative, times[k - 1], x, dt)
        if not np.all(np.isfinite(x)):
            raise NumericalAbort(k, float(times[k]), system.layout.first_non_finite(x))
        _record(k, float(times[k]), x)

    audit_block = system.layout.block(AUDIT_BLOCK)
    quadratures = dict(zip(audit_block.names, (float(v) for v in x[audit_block.slice])))
    audit = EnergyAudit.from_run(quadratures, stored_start, asdict(system.stored_energy(x)))
    logger.info(
        "Finished '%s' in %.2f s, energy residual %.3g (relative %.3g)",
        scenario.name,
        time.perf_counter() - started,
        audit.residual,
        audit.relative_residual,
    )
    return TimeSeriesOutput(
        time=times,
        columns={name: table[:, idx].copy() for idx, name in enumerate(columns)},
        run_id=run_id or scenario.name,
        audit=audit,
        state_names=system.layout.names,
        final_state=x,
    )


@dataclass(frozen=True)
class RunArtifacts:
    run_id: str
    csv: Path
    summary: Path
    report: Optional[Path] = None
    status: str = "ok"
    message: str = ""
    audit: Optional[EnergyAudit] = None


def run_to_files(scenario: Scenario, out_dir: Path | str, run_id: Optional[str] = None, report: bool = False) -> RunArtifacts:
    out_path = Path(out_dir)
    out_path.mkdir(parents=True, exist_ok=True)
    rid = run_id or scenario.name
    out = integrate(scenario, run_id=rid)
    csv_path = write_output(out, out_path / f"{rid}.csv")
    summary_path = write_summary(out, out_path / f"{rid}.summary.txt")
    report_path = None
    if report:
        report_path = write_report(out, out_path / f"{rid}.html")
    return RunArtifacts(rid, csv_path, summary_path, report_path, audit=out.audit)


# --- sweeps -----------------------------------------------------------------


def parse_variation(text: str) -> Tuple[str, List[Any]]:
    """``dotted.key=a,b,c`` -> (key, [a, b, c]) with YAML scalar typing."""
    if "=" not in text:
        raise ValueError(f"Variation '{text}' must look like dotted.key=a,b,c")
    key, raw = text.split("=", 1)
    values = [yaml.safe_load(item) for item in raw.split(",") if item.strip() != ""]
    if not key.strip() or not values:
        raise ValueError(f"Variation '{text}' needs a key and at least one value")
    return key.strip(), values


def set_dotted(tree: Dict[str, Any], key: str, value: Any) -> None:
    node = tree
    parts = key.split(".")
    for part in parts[:-1]:
        child = node.get(part)
        if not isinstance(child, dict):
            child = {}
            node[part] = child
        node = child
    node[parts[-1]] = value


def sweep_assignments(variations: Sequence[str]) -> List[Dict[str, Any]]:
    parsed = [parse_variation(item) for item in variations]
    keys = [key for key, _ in parsed]
    return [dict(zip(keys, combo)) for combo in itertools.product(*(values for _, values in parsed))]


def sweep_run_id(base: str, assignment: Dict[str, Any]) -> str:
    parts = [f"{key.split('.')[-1]}={value}" for key, value in assignment.items()]
    raw = "__".join([base] + parts)
    return re.sub(r"[^A-Za-z0-9._=+-]", "_", raw)


def _sweep_worker(scenario: Scenario, out_dir: str, run_id: str, report: bool) -> RunArtifacts:
    try:
        return run_to_files(scenario, out_dir, run_id, report)
    except NumericalAbort as exc:
        logger.warning("Run %s aborted: %s", run_id, exc)
        out_path = Path(out_dir)
        return RunArtifacts(run_id, out_path / f"{run_id}.csv", out_path / f"{run_id}.summary.txt", None, "aborted", str(exc))


def sweep(
    scenario_path: Path | str,
    variations: Sequence[str],
    out_dir: Path | str,
    jobs: int = 1,
    report: bool = False,
) -> List[RunArtifacts]:
    """Run the cartesian product of all variations; every scenario is validated first."""
    path = Path(scenario_path)
    base_tree = load_yaml_file(path)
    scenarios: List[Tuple[str, Scenario]] = []
    errors: List[str] = []
    for assignment in sweep_assignments(variations):
        tree = copy.deepcopy(base_tree)
        for key, value in assignment.items():
            set_dotted(tree, key, value)
        run_id = sweep_run_id(path.stem, assignment)
        try:
            scenarios.append((run_id, scenario_from_tree(tree, path.parent, run_id)))
        except ScenarioError as exc:
            errors.extend(f"[{run_id}] {message}" for message in exc.errors)
    if errors:
        raise ScenarioError(errors)
    logger.info("Sweeping %d runs with %d job(s)", len(scenarios), jobs)
    return Parallel(n_jobs=jobs)(
        delayed(_sweep_worker)(scenario, str(out_dir), run_id, report) for run_id, scenario in scenarios
    )


__all__ = [
    "NumericalAbort",
    "RunArtifacts",
    "build_system",
    "integrate",
    "march",
    "run_to_files",
    "parse_variation",
    "set_dotted",
    "sweep_assignments",
    "sweep_run_id",
    "sweep",
]
