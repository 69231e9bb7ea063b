"""Pydantic schema of the ``wind`` configuration subtree."""
from __future__ import annotations

from typing import List, Optional

import numpy as np
from pydantic import Field, model_validator

from core.config import StrictModel, pick_angle
from core.geometry import Vec3

from .core import (
    DavenportCoherence,
    DirectTurbulence,
    GridPoint,
    KaimalPsd,
    PanowskyTurbulence,
    TabulatedAngle,
    TabulatedCoherence,
    TabulatedPsd,
    WindFieldSpec,
    ZeroAngle,
)


def _check_table(knots: List[float], values: List[float]) -> None:
    if len(knots) < 2:
        raise ValueError(f"needs at least 2 knots, got {len(knots)}")
    if len(knots) != len(values):
        raise ValueError(f"{len(knots)} knots but {len(values)} values")
    if np.any(np.diff(knots) <= 0):
        raise ValueError("knots must be strictly increasing")
    if knots[0] < 0:
        raise ValueError("knots must be >= 0")


class PointModel(StrictModel):
    id: int
    x_m: float = 0.0
    y_m: float = 0.0
    z_m: float = Field(gt=0)


class DirectModel(StrictModel):
    intensity: float = Field(ge=0)


class PanowskyModel(StrictModel):
    z0_m: float = Field(gt=0)


class TurbulenceModel(StrictModel):
    direct: Optional[DirectModel] = None
    panowsky: Optional[PanowskyModel] = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "TurbulenceModel":
        if (self.direct is None) == (self.panowsky is None):
            raise ValueError("exactly one turbulence model (direct or panowsky) must be given")
        return self


class KaimalModel(StrictModel):
    length_scale_m: float = Field(gt=0)


class TabulatedPsdModel(StrictModel):
    frequency_hz: List[float]
    density_m2_s2_per_hz: List[float]

    @model_validator(mode="after")
    def _table(self) -> "TabulatedPsdModel":
        _check_table(self.frequency_hz, self.density_m2_s2_per_hz)
        if min(self.density_m2_s2_per_hz) < 0:
            raise ValueError("densities must be >= 0")
        return self


class PsdModel(StrictModel):
    kaimal: Optional[KaimalModel] = None
    tabulated: Optional[TabulatedPsdModel] = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "PsdModel":
        if (self.kaimal is None) == (self.tabulated is None):
            raise ValueError("exactly one PSD model (kaimal or tabulated) must be given")
        return self


class DavenportModel(StrictModel):
    decay: float = Field(ge=0)


class TabulatedCoherenceModel(StrictModel):
    reduced_frequency: List[float]
    coherence: List[float]

    @model_validator(mode="after")
    def _table(self) -> "TabulatedCoherenceModel":
        _check_table(self.reduced_frequency, self.coherence)
        if min(self.coherence) < 0 or max(self.coherence) > 1:
            raise ValueError("coherence values must lie in [0, 1]")
        return self


class CoherenceModel(StrictModel):
    davenport: Optional[DavenportModel] = None
    tabulated: Optional[TabulatedCoherenceModel] = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "CoherenceModel":
        if (self.davenport is None) == (self.tabulated is None):
            raise ValueError("exactly one coherence model (davenport or tabulated) must be given")
        return self


class TabulatedAngleModel(StrictModel):
    frequency_hz: List[float]
    angle_rad: Optional[List[float]] = None
    angle_deg: Optional[List[float]] = None

    @model_validator(mode="after")
    def _table(self) -> "TabulatedAngleModel":
        if (self.angle_rad is None) == (self.angle_deg is None):
            raise ValueError("give exactly one of angle_rad or angle_deg")
        _check_table(self.frequency_hz, self.angles())
        return self

    def angles(self) -> List[float]:
        if self.angle_rad is not None:
            return [pick_angle(value, None) for value in self.angle_rad]
        return [pick_angle(None, value) for value in self.angle_deg or []]


class AngleModel(StrictModel):
    tabulated: TabulatedAngleModel


class WindConfig(StrictModel):
    points: List[PointModel] = Field(min_length=1)
    nacelle_height_m: float = Field(gt=0)
    nacelle_wind_mps: float = Field(ge=0)
    shear_exponent: float = Field(ge=0)
    turbulence: TurbulenceModel
    psd: PsdModel
    coherence: CoherenceModel
    angle: Optional[AngleModel] = None
    sample_rate_hz: float = Field(gt=0)
    duration_s: float = Field(gt=0)
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64)

    @model_validator(mode="after")
    def _unique_ids(self) -> "WindConfig":
        ids = [p.id for p in self.points]
        if len(set(ids)) != len(ids):
            raise ValueError(f"point ids must be unique, got {ids}")
        return self

    def to_spec(self, default_seed: int = 0) -> WindFieldSpec:
        if self.turbulence.direct is not None:
            turbulence = DirectTurbulence(self.turbulence.direct.intensity)
        else:
            turbulence = PanowskyTurbulence(self.turbulence.panowsky.z0_m)
        if self.psd.kaimal is not None:
            psd = KaimalPsd(self.psd.kaimal.length_scale_m)
        else:
            table = self.psd.tabulated
            psd = TabulatedPsd(tuple(table.frequency_hz), tuple(table.density_m2_s2_per_hz))
        if self.coherence.davenport is not None:
            coherence = DavenportCoherence(self.coherence.davenport.decay)
        else:
            table = self.coherence.tabulated
            coherence = TabulatedCoherence(tuple(table.reduced_frequency), tuple(table.coherence))
        angle = ZeroAngle()
        if self.angle is not None:
            table = self.angle.tabulated
            angle = TabulatedAngle(tuple(table.frequency_hz), tuple(table.angles()))
        return WindFieldSpec(
            points=tuple(GridPoint(p.id, Vec3(p.x_m, p.y_m, p.z_m)) for p in self.points),
            nacelle_height_m=self.nacelle_height_m,
            nacelle_wind_mps=self.nacelle_wind_mps,
            shear_exponent=self.shear_exponent,
            turbulence=turbulence,
            psd=psd,
            coherence=coherence,
            sample_rate_hz=self.sample_rate_hz,
            duration_s=self.duration_s,
            seed=self.seed if self.seed is not None else default_seed,
            angle_tf=angle,
        )


__all__ = ["WindConfig", "PointModel"]
