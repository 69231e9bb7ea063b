from __future__ import annotations

from pathlib import Path

import typer

from core.config import ConfigError
from windfield.core import WindFieldSpec
from windfield.estimate import verify
from windfield.io import load_wind_spec, read_wind_csv, write_wind_csv
from windfield.synthesis import generate

from ..common import console, print_errors, render_table
from ..i18n import t

EXIT_FAILED = 1
EXIT_INVALID = 2

wind_app = typer.Typer(help="Wind field synthesis and verification")


def _load_spec(path: Path) -> WindFieldSpec:
    if not path.is_file():
        raise typer.BadParameter(t("msgs.missing_file", path=str(path)))
    try:
        return load_wind_spec(path)
    except ConfigError as exc:
        print_errors(t("wind.invalid", path=str(path)), exc.errors)
        raise typer.Exit(code=EXIT_INVALID) from exc


@wind_app.command("wind", help="Synthesise a correlated wind field to CSV")
def wind(
    spec: Path = typer.Option(..., "--spec", help="Wind spec YAML"),
    out: Path = typer.Option(Path("out/wind.csv"), "--out", "-o", help="CSV with columns t, v_p<id>"),
) -> None:
    loaded = _load_spec(spec)
    series = generate(loaded)
    write_wind_csv(series, out)
    console().print(t("wind.saved", points=series.n_points, steps=series.n_steps, path=str(out)))


@wind_app.command("wind-verify", help="Check a wind CSV against its spec")
def wind_verify(
    series: Path = typer.Option(..., "--series", help="Wind CSV written by 'wind'"),
    spec: Path = typer.Option(..., "--spec", help="Wind spec the series was generated from"),
) -> None:
    loaded = _load_spec(spec)
    if not series.is_file():
        raise typer.BadParameter(t("msgs.missing_file", path=str(series)))
    try:
        result = verify(read_wind_csv(series), loaded)
    except ValueError as exc:
        raise typer.BadParameter(str(exc)) from exc

    low, high = result.band_hz
    console().print(t("verify.band", low=low, high=high))
    report = result.report
    render_table(
        t("verify.stats"),
        ["point", "mean", "std", "skewness", "kurtosis"],
        (
            (f"p{pid}", f"{report.means[k]:.4f}", f"{report.stds[k]:.4f}", f"{report.skewness[k]:.4f}", f"{report.kurtosis[k]:.4f}")
            for k, pid in enumerate(report.point_ids)
        ),
    )
    render_table(
        t("verify.checks"),
        ["check", "value", "limit", "result"],
        (
            (check.name, f"{check.value:.4g}", f"{check.limit:.4g}", "PASS" if check.passed else "FAIL")
            for check in result.checks
        ),
    )
    if not result.passed:
        console().print(f"[red]{t('verify.failed', count=len(result.failed()))}[/]")
        raise typer.Exit(code=EXIT_FAILED)
    console().print(f"[green]{t('verify.passed')}[/]")
