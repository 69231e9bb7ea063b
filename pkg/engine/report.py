"""HTML run report with embedded matplotlib traces."""
from __future__ import annotations

import base64
import io
from pathlib import Path
from typing import List, Tuple

import matplotlib

from .output import ABSORBED, INTERNAL, SUPPLIED, TimeSeriesOutput, summarize

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

TRACES: Tuple[Tuple[str, str, str], ...] = (
    ("omega_rotor", "Rotor speed", "rad/s"),
    ("m_em", "Electromagnetic torque", "Nm"),
    ("wind_eff", "Rotor-effective wind", "m/s"),
    ("p_stator", "Stator power", "W"),
)


def _figure_to_data_uri(fig: plt.Figure) -> str:
    buffer = io.BytesIO()
    fig.savefig(buffer, format="png", bbox_inches="tight")
    plt.close(fig)
    buffer.seek(0)
    encoded = base64.b64encode(buffer.read()).decode("ascii")
    return f"data:image/png;base64,{encoded}"


def _trace_image(out: TimeSeriesOutput, column: str, title: str, unit: str) -> str:
    fig, ax = plt.subplots(figsize=(6, 1.8))
    ax.plot(out.time, out.columns[column], color="#2b6cb0", linewidth=0.8)
    ax.set_title(title, fontsize=8)
    ax.set_xlabel("t (s)", fontsize=7)
    ax.set_ylabel(unit, fontsize=7)
    ax.tick_params(axis="both", labelsize=6)
    fig.tight_layout()
    return _figure_to_data_uri(fig)


def _audit_table(out: TimeSeriesOutput) -> str:
    if out.audit is None:
        return "<p>No energy audit.</p>"
    rows = "".join(
        f"<tr><th>{name}</th><td>{out.audit.terms[name]:.6g}</td></tr>"
        for name in SUPPLIED + ABSORBED + INTERNAL
        if name in out.audit.terms
    )
    return (
        "<table class='metrics'>"
        f"{rows}"
        f"<tr><th>residual</th><td>{out.audit.residual:.6g}</td></tr>"
        f"<tr><th>relative residual</th><td>{out.audit.relative_residual:.3e}</td></tr>"
        "</table>"
    )


def _summary_table(out: TimeSeriesOutput) -> str:
    frame = summarize(out)
    if frame.empty:
        return ""
    return frame.to_html(classes="metrics", float_format=lambda value: f"{value:.6g}")


def render_html(out: TimeSeriesOutput) -> str:
    charts: List[Tuple[str, str]] = [
        (_trace_image(out, column, title, unit), title) for column, title, unit in TRACES if column in out.columns
    ]
    figures = "".join(
        f"<figure><img src='{uri}' alt='{label}'/><figcaption>{label}</figcaption></figure>" for uri, label in charts
    )
    return (
        "<!DOCTYPE html><html><head><meta charset='utf-8'>"
        "<style>"
        "body {font-family: Arial, sans-serif; margin: 1.5rem;}"
        "section {margin-bottom: 1.5rem;}"
        ".metrics {border-collapse: collapse;}"
        ".metrics th, .metrics td {border: 1px solid #ccc; padding: 0.3rem 0.6rem;}"
        ".charts figure {display: block; margin-bottom: 1rem;}"
        ".charts figcaption {font-size: 0.75rem; color: #555; margin-top: 0.3rem;}"
        "</style></head><body>"
        f"<header><h1>WECS Run Report</h1><p>Run: {out.run_id}</p>"
        f"<p>Steps: {len(out.time) - 1}, dt = {out.dt:.6g} s</p></header>"
        f"<section><h2>Traces</h2><div class='charts'>{figures or '<p>No traced columns.</p>'}</div></section>"
        f"<section><h2>Energy Audit</h2>{_audit_table(out)}</section>"
        f"<section><h2>Column Summary</h2>{_summary_table(out)}</section>"
        "</body></html>"
    )


def write_report(out: TimeSeriesOutput, path: Path | str) -> Path:
    html_path = Path(path)
    html_path.parent.mkdir(parents=True, exist_ok=True)
    html_path.write_text(render_html(out), encoding="utf-8")
    return html_path


__all__ = ["render_html", "write_report"]
