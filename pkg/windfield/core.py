"""Wind-field specification types and the point statistics they imply."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from core.geometry import Vec3

logger = logging.getLogger(__name__)

MIN_STEPS = 64


@dataclass(frozen=True)
class GridPoint:
    id: int
    position: Vec3


@dataclass(frozen=True)
class DirectTurbulence:
    intensity: float


@dataclass(frozen=True)
class PanowskyTurbulence:
    z0_m: float


@dataclass(frozen=True)
class KaimalPsd:
    length_scale_m: float


@dataclass(frozen=True)
class TabulatedPsd:
    frequency_hz: Tuple[float, ...]
    density: Tuple[float, ...]


@dataclass(frozen=True)
class DavenportCoherence:
    decay: float


@dataclass(frozen=True)
class TabulatedCoherence:
    """Coherence tabulated over the reduced frequency f * distance / mean speed."""

    reduced_frequency: Tuple[float, ...]
    coherence: Tuple[float, ...]


@dataclass(frozen=True)
class ZeroAngle:
    pass


@dataclass(frozen=True)
class TabulatedAngle:
    frequency_hz: Tuple[float, ...]
    angle_rad: Tuple[float, ...]


Turbulence = Union[DirectTurbulence, PanowskyTurbulence]
PsdModel = Union[KaimalPsd, TabulatedPsd]
CoherenceModel = Union[DavenportCoherence, TabulatedCoherence]
AngleModel = Union[ZeroAngle, TabulatedAngle]


def _table_errors(name: str, knots: Sequence[float], values: Sequence[float]) -> List[str]:
    errors: List[str] = []
    if len(knots) < 2:
        errors.append(f"{name}: needs at least 2 knots, got {len(knots)}")
    if len(knots) != len(values):
        errors.append(f"{name}: {len(knots)} knots but {len(values)} values")
    if len(knots) >= 2 and np.any(np.diff(np.asarray(knots, dtype=float)) <= 0):
        errors.append(f"{name}: knots must be strictly increasing")
    if len(knots) and float(knots[0]) < 0:
        errors.append(f"{name}: knots must be >= 0")
    if not np.all(np.isfinite(np.asarray(values, dtype=float))):
        errors.append(f"{name}: values must be finite")
    return errors


@dataclass(frozen=True)
class WindFieldSpec:
    points: Tuple[GridPoint, ...]
    nacelle_height_m: float
    nacelle_wind_mps: float
    shear_exponent: float
    turbulence: Turbulence
    psd: PsdModel
    coherence: CoherenceModel
    sample_rate_hz: float
    duration_s: float
    seed: int = 0
    angle_tf: AngleModel = field(default_factory=ZeroAngle)

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        errors = self.validation_errors()
        if errors:
            raise ValueError("Invalid wind field spec: " + "; ".join(errors))

    def validation_errors(self) -> List[str]:
        errors: List[str] = []
        if not self.points:
            errors.append("points: at least one grid point is required")
        ids = [p.id for p in self.points]
        if len(set(ids)) != len(ids):
            errors.append("points: ids must be unique")
        for p in self.points:
            if p.position.z <= 0:
                errors.append(f"points[{p.id}].z_m: must be above ground, got {p.position.z}")
        if self.sample_rate_hz <= 0:
            errors.append(f"sample_rate_hz: must be > 0, got {self.sample_rate_hz}")
        if self.duration_s <= 0:
            errors.append(f"duration_s: must be > 0, got {self.duration_s}")
        if self.shear_exponent < 0:
            errors.append(f"shear_exponent: must be >= 0, got {self.shear_exponent}")
        if self.nacelle_height_m <= 0:
            errors.append(f"nacelle_height_m: must be > 0, got {self.nacelle_height_m}")
        if self.nacelle_wind_mps < 0:
            errors.append(f"nacelle_wind_mps: must be >= 0, got {self.nacelle_wind_mps}")
        if not 0 <= self.seed < 2**64:
            errors.append(f"seed: must be a 64-bit unsigned integer, got {self.seed}")
        if isinstance(self.turbulence, DirectTurbulence) and self.turbulence.intensity < 0:
            errors.append(f"turbulence.direct.intensity: must be >= 0, got {self.turbulence.intensity}")
        if isinstance(self.turbulence, PanowskyTurbulence) and self.turbulence.z0_m <= 0:
            errors.append(f"turbulence.panowsky.z0_m: must be > 0, got {self.turbulence.z0_m}")
        if isinstance(self.psd, KaimalPsd) and self.psd.length_scale_m <= 0:
            errors.append(f"psd.kaimal.length_scale_m: must be > 0, got {self.psd.length_scale_m}")
        if isinstance(self.psd, TabulatedPsd):
            errors.extend(_table_errors("psd.tabulated", self.psd.frequency_hz, self.psd.density))
            if np.any(np.asarray(self.psd.density, dtype=float) < 0):
                errors.append("psd.tabulated: densities must be >= 0")
        if isinstance(self.coherence, DavenportCoherence) and self.coherence.decay < 0:
            errors.append(f"coherence.davenport.decay: must be >= 0, got {self.coherence.decay}")
        if isinstance(self.coherence, TabulatedCoherence):
            errors.extend(
                _table_errors("coherence.tabulated", self.coherence.reduced_frequency, self.coherence.coherence)
            )
            values = np.asarray(self.coherence.coherence, dtype=float)
            if np.any(values < 0) or np.any(values > 1):
                errors.append("coherence.tabulated: coherence values must lie in [0, 1]")
        if isinstance(self.angle_tf, TabulatedAngle):
            errors.extend(_table_errors("angle_tf.tabulated", self.angle_tf.frequency_hz, self.angle_tf.angle_rad))
        return errors

    @property
    def n_steps(self) -> int:
        return int(round(self.duration_s * self.sample_rate_hz))

    @property
    def dt(self) -> float:
        return 1.0 / self.sample_rate_hz

    @property
    def nyquist_hz(self) -> float:
        return 0.5 * self.sample_rate_hz

    def point_by_id(self, point_id: int) -> GridPoint:
        for point in self.points:
            if point.id == point_id:
                return point
        raise KeyError(f"No grid point with id {point_id}")


@dataclass(frozen=True)
class WindSeries:
    dt: float
    samples: np.ndarray
    point_ids: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        samples = np.atleast_2d(np.asarray(self.samples, dtype=float))
        if not np.all(np.isfinite(samples)):
            raise ValueError("Wind series contains non-finite samples")
        if self.dt <= 0:
            raise ValueError(f"Wind series dt must be positive, got {self.dt}")
        object.__setattr__(self, "samples", samples)
        if self.point_ids is None:
            object.__setattr__(self, "point_ids", tuple(range(samples.shape[0])))
        elif len(self.point_ids) != samples.shape[0]:
            raise ValueError(f"{len(self.point_ids)} point ids for {samples.shape[0]} series")

    @property
    def n_points(self) -> int:
        return int(self.samples.shape[0])

    @property
    def n_steps(self) -> int:
        return int(self.samples.shape[1])

    @property
    def duration_s(self) -> float:
        return self.n_steps * self.dt

    @property
    def time(self) -> np.ndarray:
        return np.arange(self.n_steps) * self.dt


def gaussian_pdf(v: float, mu: float, sigma: float) -> float:
    """Normal density of wind speed ``v`` in s/m."""
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    z = (v - mu) / sigma
    return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi * sigma * sigma)


def mean_velocity_at_height(spec: WindFieldSpec, z: float) -> float:
    """Power-law height profile anchored at the nacelle wind."""
    if z < 0:
        raise ValueError(f"Height must be >= 0, got {z}")
    return spec.nacelle_wind_mps * (z / spec.nacelle_height_m) ** spec.shear_exponent


def turbulence_sigma(spec: WindFieldSpec, mu: float, z: float) -> float:
    if mu < 0:
        raise ValueError(f"Mean speed must be >= 0, got {mu}")
    if isinstance(spec.turbulence, DirectTurbulence):
        return mu * spec.turbulence.intensity
    z0 = spec.turbulence.z0_m
    if z <= z0:
        raise ValueError(f"Panowsky model needs height above roughness length (z={z}, z0={z0})")
    return mu / math.log(z / z0)


def point_statistics(spec: WindFieldSpec, point: GridPoint) -> Tuple[float, float]:
    """(mean, standard deviation) of the wind speed at ``point``."""
    mu = mean_velocity_at_height(spec, point.position.z)
    return mu, turbulence_sigma(spec, mu, point.position.z)


__all__ = [
    "MIN_STEPS",
    "GridPoint",
    "DirectTurbulence",
    "PanowskyTurbulence",
    "KaimalPsd",
    "TabulatedPsd",
    "DavenportCoherence",
    "TabulatedCoherence",
    "ZeroAngle",
    "TabulatedAngle",
    "WindFieldSpec",
    "WindSeries",
    "gaussian_pdf",
    "mean_velocity_at_height",
    "turbulence_sigma",
    "point_statistics",
]
