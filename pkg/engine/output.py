"""Run results: time-series table, energy audit, CSV and summary files."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.9g"

# terms that cross the system boundary or leave it as heat/storage
SUPPLIED = ("e_aero", "e_applied")
ABSORBED = (
    "d_kinetic",
    "d_spring",
    "e_friction",
    "e_damping",
    "e_machine_loss",
    "d_magnetic",
    "e_machine_storage",
    "e_grid_loss",
    "d_grid",
    "e_source_out",
)
INTERNAL = ("e_em_mech", "e_stator_in")


@dataclass(frozen=True)
class EnergyAudit:
    """Global energy balance over a run, every term in joules."""

    terms: Dict[str, float]

    @property
    def supplied(self) -> float:
        return sum(self.terms.get(name, 0.0) for name in SUPPLIED)

    @property
    def absorbed(self) -> float:
        return sum(self.terms.get(name, 0.0) for name in ABSORBED)

    @property
    def residual(self) -> float:
        return self.supplied - self.absorbed

    @property
    def reference(self) -> float:
        gross = 0.5 * sum(abs(self.terms.get(name, 0.0)) for name in SUPPLIED + ABSORBED)
        return max(gross, 1e-300)

    @property
    def relative_residual(self) -> float:
        return abs(self.residual) / self.reference

    @classmethod
    def from_run(
        cls,
        quadratures: Dict[str, float],
        stored_start: Dict[str, float],
        stored_end: Dict[str, float],
    ) -> "EnergyAudit":
        terms = dict(quadratures)
        for name in ("kinetic", "spring", "magnetic", "grid"):
            terms[f"d_{name}"] = stored_end.get(name, 0.0) - stored_start.get(name, 0.0)
        return cls(terms)


@dataclass
class TimeSeriesOutput:
    time: np.ndarray
    columns: Dict[str, np.ndarray]
    run_id: str = "run"
    audit: Optional[EnergyAudit] = None
    state_names: Tuple[str, ...] = ()
    final_state: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self) -> None:
        for name, values in self.columns.items():
            if len(values) != len(self.time):
                raise ValueError(f"Column '{name}' has {len(values)} rows, time has {len(self.time)}")

    @property
    def dt(self) -> float:
        return float(self.time[1] - self.time[0]) if len(self.time) > 1 else 0.0

    def to_frame(self) -> pd.DataFrame:
        data = {"t": self.time}
        data.update(self.columns)
        return pd.DataFrame(data)

    def final(self, name: str) -> float:
        return float(self.final_state[self.state_names.index(name)])


def write_output(out: TimeSeriesOutput, path: Path | str) -> Path:
    """CSV with a header row, 9 significant digits and LF line endings."""
    csv_path = Path(path)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    out.to_frame().to_csv(csv_path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info("Wrote %d rows x %d columns to %s", len(out.time), len(out.columns) + 1, csv_path)
    return csv_path


def read_output(path: Path | str) -> pd.DataFrame:
    return pd.read_csv(path)


def summarize(out: TimeSeriesOutput) -> pd.DataFrame:
    """Per-column min, max, mean and std (population)."""
    rows: List[Dict[str, float]] = []
    for name, values in out.columns.items():
        series = np.asarray(values, dtype=float)
        rows.append(
            {
                "column": name,
                "min": float(series.min()),
                "max": float(series.max()),
                "mean": float(series.mean()),
                "std": float(series.std()),
            }
        )
    return pd.DataFrame(rows, columns=["column", "min", "max", "mean", "std"]).set_index("column")


def summary_text(out: TimeSeriesOutput) -> str:
    lines = ["name min max mean std"]
    for name, row in summarize(out).iterrows():
        values = " ".join(FLOAT_FORMAT % row[key] for key in ("min", "max", "mean", "std"))
        lines.append(f"{name} {values}")
    if out.audit is not None:
        lines.append("")
        lines.append("energy_audit J")
        for name in SUPPLIED + ABSORBED + INTERNAL:
            if name in out.audit.terms:
                lines.append(f"{name} {FLOAT_FORMAT % out.audit.terms[name]}")
        lines.append(f"residual {FLOAT_FORMAT % out.audit.residual}")
        lines.append(f"relative_residual {FLOAT_FORMAT % out.audit.relative_residual}")
    return "\n".join(lines) + "\n"


def write_summary(out: TimeSeriesOutput, path: Path | str) -> Path:
    summary_path = Path(path)
    summary_path.parent.mkdir(parents=True, exist_ok=True)
    summary_path.write_text(summary_text(out), encoding="utf-8")
    return summary_path


__all__ = [
    "EnergyAudit",
    "TimeSeriesOutput",
    "write_output",
    "read_output",
    "summarize",
    "summary_text",
    "write_summary",
]
