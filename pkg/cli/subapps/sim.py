from __future__ import annotations

from pathlib import Path
from typing import List, Optional

import numpy as np
import typer

from core.config import ConfigError
from engine.linearize import linearize as linearize_scenario
from engine.run import NumericalAbort, run_to_files, sweep as sweep_scenario
from engine.scenario import Scenario, load_scenario_file

from ..common import console, print_errors, render_table
from ..i18n import t

EXIT_INVALID = 2
EXIT_ABORTED = 3

sim_app = typer.Typer(help="Scenario simulation commands")


def _require_file(path: Path) -> None:
    if not path.is_file():
        raise typer.BadParameter(t("msgs.missing_file", path=str(path)))


def _load(path: Path) -> Scenario:
    _require_file(path)
    try:
        return load_scenario_file(path)
    except ConfigError as exc:
        print_errors(t("scenario.invalid", path=str(path)), exc.errors)
        raise typer.Exit(code=EXIT_INVALID) from exc


@sim_app.command("validate", help="Check a scenario and list every error")
def validate(scenario: Path = typer.Option(..., "--scenario", "-s", help="Scenario YAML/JSON file")) -> None:
    _load(scenario)
    console().print(f"[green]{t('scenario.valid')}[/]")


@sim_app.command("run", help="Integrate a scenario and write CSV, summary and report")
def run(
    scenario: Path = typer.Option(..., "--scenario", "-s", help="Scenario YAML/JSON file"),
    out: Path = typer.Option(Path("out"), "--out", "-o", help="Output directory"),
    report: bool = typer.Option(False, "--report", help="Also write an HTML report"),
) -> None:
    loaded = _load(scenario)
    console().print(t("run.started", name=loaded.name, mode=loaded.mode, steps=loaded.n_steps))
    try:
        artifacts = run_to_files(loaded, out, report=report)
    except NumericalAbort as exc:
        console().print(f"[red]{t('run.aborted', error=str(exc))}[/]")
        raise typer.Exit(code=EXIT_ABORTED) from exc
    for path in (artifacts.csv, artifacts.summary, artifacts.report):
        if path is not None:
            console().print(t("run.saved", path=str(path)))
    if artifacts.audit is not None:
        console().print(
            t("run.audit", residual=artifacts.audit.residual, relative=artifacts.audit.relative_residual)
        )


@sim_app.command("sweep", help="Run a cartesian parameter sweep in parallel")
def sweep(
    scenario: Path = typer.Option(..., "--scenario", "-s", help="Base scenario file"),
    vary: List[str] = typer.Option(..., "--vary", help="dotted.key=a,b,c; repeat for a cartesian product"),
    out: Path = typer.Option(Path("out/sweep"), "--out", "-o"),
    jobs: int = typer.Option(1, "--jobs", "-j", min=1),
    report: bool = typer.Option(False, "--report"),
) -> None:
    _require_file(scenario)
    try:
        results = sweep_scenario(scenario, vary, out, jobs=jobs, report=report)
    except ConfigError as exc:
        print_errors(t("scenario.invalid", path=str(scenario)), exc.errors)
        raise typer.Exit(code=EXIT_INVALID) from exc
    except ValueError as exc:
        raise typer.BadParameter(str(exc)) from exc
    render_table(
        t("sweep.title"),
        ["run_id", "status", "csv"],
        ((item.run_id, item.status, item.csv if item.status == "ok" else item.message) for item in results),
    )
    aborted = [item for item in results if item.status != "ok"]
    if aborted:
        console().print(f"[red]{t('sweep.aborted', count=len(aborted))}[/]")
        raise typer.Exit(code=EXIT_ABORTED)


@sim_app.command("linearize", help="Eigenvalues of the finite-difference Jacobian")
def linearize(
    scenario: Path = typer.Option(..., "--scenario", "-s"),
    at_time: float = typer.Option(0.0, "--at-time", help="Linearise after marching to this time (s)"),
    eps: Optional[float] = typer.Option(None, "--eps", help="Relative finite-difference step"),
) -> None:
    loaded = _load(scenario)
    try:
        result = linearize_scenario(loaded, at_time=at_time, eps=eps if eps is not None else 1e-6)
    except NumericalAbort as exc:
        console().print(f"[red]{t('run.aborted', error=str(exc))}[/]")
        raise typer.Exit(code=EXIT_ABORTED) from exc
    except ValueError as exc:
        raise typer.BadParameter(str(exc)) from exc

    def _row(value: complex):
        magnitude = abs(value)
        damping = -value.real / magnitude if magnitude > 0 else 1.0
        return (f"{value.real:.6g}", f"{value.imag:.6g}", f"{abs(value.imag) / (2 * np.pi):.4g}", f"{damping:.4f}")

    render_table(
        t("linearize.title", time=result.time),
        ["real (1/s)", "imag (rad/s)", "f (Hz)", "damping"],
        (_row(complex(value)) for value in result.eigenvalues),
    )
