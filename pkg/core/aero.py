"""cp-lambda rotor model: tip-speed ratio, power coefficient and shaft torque."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Tuple

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

BETZ_LIMIT = 0.593


@dataclass(frozen=True)
class RotorParams:
    radius_m: float
    air_density_kgm3: float = 1.225
    cp_table: Tuple[Tuple[float, float], ...] = field(default_factory=tuple)
    _lambdas: np.ndarray = field(init=False, repr=False, compare=False)
    _cps: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.radius_m <= 0:
            raise ValueError(f"Rotor radius must be positive, got {self.radius_m}")
        if self.air_density_kgm3 <= 0:
            raise ValueError(f"Air density must be positive, got {self.air_density_kgm3}")
        table = tuple((float(lam), float(cp)) for lam, cp in self.cp_table)
        if len(table) < 2:
            raise ValueError("cp table needs at least two (lambda, cp) knots")
        lambdas = np.array([lam for lam, _ in table])
        cps = np.array([cp for _, cp in table])
        if lambdas[0] < 0:
            raise ValueError(f"cp table lambda knots must be >= 0, got {lambdas[0]}")
        if np.any(np.diff(lambdas) <= 0):
            raise ValueError("cp table lambda knots must be strictly increasing")
        if np.any(cps < 0) or np.any(cps > BETZ_LIMIT):
            bad = float(cps[(cps < 0) | (cps > BETZ_LIMIT)][0])
            raise ValueError(f"cp knot {bad} outside [0, {BETZ_LIMIT}] (Betz bound)")
        object.__setattr__(self, "cp_table", table)
        object.__setattr__(self, "_lambdas", lambdas)
        object.__setattr__(self, "_cps", cps)

    @property
    def lambdas(self) -> np.ndarray:
        return self._lambdas

    @property
    def cps(self) -> np.ndarray:
        return self._cps

    @property
    def swept_area_m2(self) -> float:
        return math.pi * self.radius_m**2


def load_cp_table(path: Path | str) -> Tuple[Tuple[float, float], ...]:
    """Read a two-column (lambda, cp) CSV; a header row is optional."""
    frame = pd.read_csv(path, header=None, comment="#")
    if not np.issubdtype(frame.dtypes.iloc[0], np.number):
        frame = pd.read_csv(path, comment="#")
    if frame.shape[1] < 2:
        raise ValueError(f"cp table '{path}' needs two columns, found {frame.shape[1]}")
    values = frame.iloc[:, :2].astype(float).to_numpy()
    logger.info("Loaded cp table with %d knots from %s", len(values), path)
    return tuple((float(lam), float(cp)) for lam, cp in values)


def tip_speed_ratio(omega: float, v: float, params: RotorParams) -> float:
    """lambda = omega * R / v; returns ``math.inf`` when there is no wind."""
    if v < 0 or omega < 0:
        raise ValueError(f"tip_speed_ratio needs omega >= 0 and v >= 0, got omega={omega}, v={v}")
    if v == 0:
        return math.inf
    return omega * params.radius_m / v


def power_coefficient(lam: float, params: RotorParams) -> float:
    """Linear interpolation in the cp table; zero outside the tabulated range."""
    if math.isinf(lam):
        return 0.0
    return float(np.interp(lam, params.lambdas, params.cps, left=0.0, right=0.0))


def aerodynamic_power(v: float, omega: float, params: RotorParams) -> float:
    if v < 0:
        raise ValueError(f"Wind speed must be >= 0, got {v}")
    if v == 0:
        return 0.0
    cp = power_coefficient(tip_speed_ratio(omega, v, params), params)
    return 0.5 * params.air_density_kgm3 * params.swept_area_m2 * cp * v**3


def _standstill_ratio(params: RotorParams) -> float:
    for lam, cp in params.cp_table:
        if lam > 0:
            return cp / lam
    return 0.0


def aerodynamic_torque(v: float, omega: float, params: RotorParams) -> float:
    """Shaft torque in Nm delivered by the rotor at wind speed ``v`` and speed ``omega``."""
    if v < 0:
        raise ValueError(f"Wind speed must be >= 0, got {v}")
    if v == 0:
        return 0.0
    if omega == 0:
        # cp/lambda limit taken at the first knot with lambda > 0
        return 0.5 * params.air_density_kgm3 * math.pi * params.radius_m**3 * _standstill_ratio(params) * v**2
    return aerodynamic_power(v, omega, params) / omega


__all__ = [
    "BETZ_LIMIT",
    "RotorParams",
    "load_cp_table",
    "tip_speed_ratio",
    "power_coefficient",
    "aerodynamic_power",
    "aerodynamic_torque",
]
