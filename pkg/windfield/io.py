"""CSV and YAML I/O for wind series and standalone wind specs."""
from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from core.config import ConfigError, load_yaml_file, validate_tree

from .core import WindFieldSpec, WindSeries
from .schema import WindConfig

logger = logging.getLogger(__name__)

COLUMN_PREFIX = "v_p"


def series_frame(series: WindSeries) -> pd.DataFrame:
    data = {"t": series.time}
    for point_id, row in zip(series.point_ids, series.samples):
        data[f"{COLUMN_PREFIX}{point_id}"] = row
    return pd.DataFrame(data)


def write_wind_csv(series: WindSeries, path: Path | str) -> Path:
    out_path = Path(path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    series_frame(series).to_csv(out_path, index=False, float_format="%.9g", lineterminator="\n")
    logger.info("Wrote wind series to %s", out_path)
    return out_path


def read_wind_csv(path: Path | str) -> WindSeries:
    frame = pd.read_csv(path)
    if "t" not in frame.columns:
        raise ValueError(f"{path}: missing time column 't'")
    columns = [c for c in frame.columns if c.startswith(COLUMN_PREFIX)]
    if not columns:
        raise ValueError(f"{path}: no '{COLUMN_PREFIX}<id>' columns found")
    time = frame["t"].to_numpy(dtype=float)
    if len(time) < 2:
        raise ValueError(f"{path}: needs at least two samples")
    dt = float(np.median(np.diff(time)))
    ids = tuple(int(c[len(COLUMN_PREFIX):]) for c in columns)
    return WindSeries(dt, frame[columns].to_numpy(dtype=float).T, ids)


def wind_spec_from_tree(tree: dict, prefix: str = "", default_seed: int = 0) -> WindFieldSpec:
    config, errors = validate_tree(WindConfig, tree, prefix)
    if config is None:
        raise ConfigError(errors)
    try:
        return config.to_spec(default_seed)
    except ValueError as exc:
        raise ConfigError([f"{prefix or '<wind>'}: {exc}"]) from exc


def load_wind_spec(path: Path | str, default_seed: int = 0) -> WindFieldSpec:
    """Load a standalone wind spec; a top-level ``wind`` key is unwrapped."""
    tree = load_yaml_file(path)
    if "wind" in tree and isinstance(tree["wind"], dict):
        default_seed = int(tree.get("seed", default_seed))
        return wind_spec_from_tree(tree["wind"], "wind", default_seed)
    return wind_spec_from_tree(tree, "", default_seed)


__all__ = ["series_frame", "write_wind_csv", "read_wind_csv", "wind_spec_from_tree", "load_wind_spec"]
