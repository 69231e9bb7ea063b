"""Coordinate frames of the wind park, the turbine, the turbine disc and the rotor."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

Mat3 = np.ndarray


@dataclass(frozen=True)
class Vec3:
    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(value) for value in (self.x, self.y, self.z)):
            raise ValueError(f"Vec3 components must be finite, got ({self.x}, {self.y}, {self.z})")

    @classmethod
    def from_array(cls, values: Iterable[float]) -> "Vec3":
        x, y, z = (float(v) for v in values)
        return cls(x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


def normalize_angle(angle: float) -> float:
    """Map an angle into (-pi, pi]."""
    if not math.isfinite(angle):
        raise ValueError(f"Angle must be finite, got {angle}")
    wrapped = math.pi - (math.pi - angle) % (2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    elif wrapped > math.pi:
        wrapped -= 2.0 * math.pi
    return wrapped


@dataclass(frozen=True)
class FrameAngles:
    """Rotor elevation (cone) angle ``a_k`` and azimuth ``a_z`` in radians."""

    a_k: float = 0.0
    a_z: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "a_k", normalize_angle(float(self.a_k)))
        object.__setattr__(self, "a_z", normalize_angle(float(self.a_z)))


def elevation_matrix(a_k: float) -> Mat3:
    c, s = math.cos(a_k), math.sin(a_k)
    return np.array(
        [
            [1.0, 0.0, 0.0],
            [0.0, c, -s],
            [0.0, s, c],
        ]
    )


def azimuth_matrix(a_z: float) -> Mat3:
    c, s = math.cos(a_z), math.sin(a_z)
    return np.array(
        [
            [c, -s, 0.0],
            [s, c, 0.0],
            [0.0, 0.0, 1.0],
        ]
    )


def rotor_matrix(angles: FrameAngles) -> Mat3:
    """Composite transform, elevation applied after azimuth."""
    return elevation_matrix(angles.a_k) @ azimuth_matrix(angles.a_z)


def wind_to_turbine(v_wp: Vec3, pos_wp: Vec3, turbine_xy: Tuple[float, float]) -> Tuple[Vec3, Vec3]:
    """Translate a park-frame point into turbine coordinates; velocity is unchanged."""
    x0, y0 = turbine_xy
    pos_t = Vec3(pos_wp.x - x0, pos_wp.y - y0, pos_wp.z)
    return v_wp, pos_t


def turbine_to_disc(v_t: Vec3, pos_t: Vec3, z_nacelle: float) -> Tuple[Vec3, Vec3]:
    if z_nacelle <= 0:
        raise ValueError(f"Nacelle height must be positive, got {z_nacelle}")
    return v_t, Vec3(pos_t.x, pos_t.y, pos_t.z - z_nacelle)


def disc_to_rotor(v: Vec3, pos: Vec3, angles: FrameAngles) -> Tuple[Vec3, Vec3]:
    matrix = rotor_matrix(angles)
    v_r = Vec3.from_array(matrix @ v.as_array())
    pos_r = Vec3.from_array(matrix @ pos.as_array())
    return v_r, pos_r


def park_to_rotor(
    v_wp: Vec3,
    pos_wp: Vec3,
    turbine_xy: Tuple[float, float],
    z_nacelle: float,
    angles: FrameAngles,
) -> Tuple[Vec3, Vec3]:
    """Run the full frame chain park -> turbine -> disc -> rotor."""
    v_t, pos_t = wind_to_turbine(v_wp, pos_wp, turbine_xy)
    v_td, pos_td = turbine_to_disc(v_t, pos_t, z_nacelle)
    return disc_to_rotor(v_td, pos_td, angles)


def park_wind(speed: float) -> Vec3:
    """Park-frame wind vector; the mean flow runs along the Y axis."""
    return Vec3(0.0, float(speed), 0.0)


__all__ = [
    "Mat3",
    "Vec3",
    "FrameAngles",
    "normalize_angle",
    "elevation_matrix",
    "azimuth_matrix",
    "rotor_matrix",
    "wind_to_turbine",
    "turbine_to_disc",
    "disc_to_rotor",
    "park_to_rotor",
    "park_wind",
]
