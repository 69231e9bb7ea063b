"""Frame transforms between the wind park, turbine, disc and rotor."""

from __future__ import annotations

import math

import numpy as np
import pytest

from core.geometry import (
    FrameAngles,
    Vec3,
    azimuth_matrix,
    elevation_matrix,
    normalize_angle,
    park_to_rotor,
    park_wind,
    rotor_matrix,
    turbine_to_disc,
    wind_to_turbine,
)
from tests.conftest import get_test_logger

logger = get_test_logger(__name__)
logger.info("Starting tests for geometry module")


@pytest.mark.parametrize(
    ("angle", "expected"),
    [
        (0.0, 0.0),
        (math.pi, math.pi),
        (-math.pi, math.pi),
        (5.0, 5.0 - 2.0 * math.pi),
        (-1.5 * math.pi, 0.5 * math.pi),
        (7.0, 7.0 - 2.0 * math.pi),
    ],
)
def test_normalize_angle_maps_into_half_open_interval(angle: float, expected: float) -> None:
    """Angles land in (-pi, pi] with pi itself kept."""
    logger.info("Running normalize_angle test for %s", angle)
    result = normalize_angle(angle)
    assert -math.pi < result <= math.pi
    assert result == pytest.approx(expected, abs=1e-12)


def test_normalize_angle_rejects_non_finite() -> None:
    """NaN angles are a domain error."""
    logger.info("Running normalize_angle NaN test")
    with pytest.raises(ValueError):
        normalize_angle(float("nan"))


def test_rotation_matrices_are_orthonormal() -> None:
    """Over 1000 random angle pairs every matrix is inverted by its transpose with determinant one."""
    logger.info("Running rotation matrix orthonormality test")
    rng = np.random.default_rng(3)
    for a_k, a_z in rng.uniform(-4.0, 4.0, size=(1000, 2)):
        for matrix in (elevation_matrix(a_k), azimuth_matrix(a_z), rotor_matrix(FrameAngles(a_k, a_z))):
            assert np.allclose(matrix.T @ matrix, np.eye(3), atol=1e-12)
            assert np.allclose(matrix @ matrix.T, np.eye(3), atol=1e-12)
            assert np.linalg.det(matrix) == pytest.approx(1.0, abs=1e-12)


def test_single_axis_rotations_compose_additively() -> None:
    """Azimuth and elevation rotations form one-parameter groups: T(a) T(b) = T(a + b)."""
    logger.info("Running rotation group property test")
    rng = np.random.default_rng(8)
    for a, b in rng.uniform(-4.0, 4.0, size=(200, 2)):
        assert np.allclose(azimuth_matrix(a) @ azimuth_matrix(b), azimuth_matrix(a + b), atol=1e-12)
        assert np.allclose(elevation_matrix(a) @ elevation_matrix(b), elevation_matrix(a + b), atol=1e-12)
        assert np.allclose(azimuth_matrix(a) @ azimuth_matrix(-a), np.eye(3), atol=1e-12)


def test_rotor_matrix_applies_azimuth_before_elevation() -> None:
    """The composite is elevation @ azimuth, which differs from the reverse order."""
    logger.info("Running composition order test")
    a_k, a_z = 0.3, 1.1
    matrix = rotor_matrix(FrameAngles(a_k, a_z))
    assert np.allclose(matrix, elevation_matrix(a_k) @ azimuth_matrix(a_z), atol=1e-15)
    assert not np.allclose(matrix, azimuth_matrix(a_z) @ elevation_matrix(a_k), atol=1e-3)
    # the along-wind axis swings in the horizontal plane first, then tilts
    rotated = matrix @ np.array([0.0, 1.0, 0.0])
    expected = np.array([-math.sin(a_z), math.cos(a_z) * math.cos(a_k), math.cos(a_z) * math.sin(a_k)])
    assert rotated == pytest.approx(expected, abs=1e-12)


def test_frame_chain_translates_positions_and_keeps_velocity() -> None:
    """Zero angles: park -> rotor is a pure translation to the hub."""
    logger.info("Running frame chain translation test")
    v_r, pos_r = park_to_rotor(park_wind(9.0), Vec3(10.0, 5.0, 40.0), (4.0, 5.0), 30.0, FrameAngles())
    assert (pos_r.x, pos_r.y, pos_r.z) == pytest.approx((6.0, 0.0, 10.0))
    assert (v_r.x, v_r.y, v_r.z) == pytest.approx((0.0, 9.0, 0.0))


def test_azimuth_rotates_about_vertical_axis() -> None:
    """A quarter turn of azimuth swings the along-wind Y axis onto -X."""
    logger.info("Running azimuth rotation test")
    rotated = azimuth_matrix(0.5 * math.pi) @ park_wind(10.0).as_array()
    assert rotated == pytest.approx([-10.0, 0.0, 0.0], abs=1e-12)


def test_rotation_preserves_wind_magnitude() -> None:
    """Speed is invariant under the disc -> rotor rotation."""
    logger.info("Running magnitude preservation test")
    wind = Vec3(1.5, 8.0, -0.7)
    v_r, _ = park_to_rotor(wind, Vec3(0.0, 0.0, 30.0), (0.0, 0.0), 30.0, FrameAngles(0.2, 2.1))
    assert v_r.norm() == pytest.approx(wind.norm(), rel=1e-12)


def test_invalid_geometry_inputs_raise() -> None:
    """Non-finite vectors and a non-positive nacelle height are rejected."""
    logger.info("Running invalid geometry input test")
    with pytest.raises(ValueError):
        Vec3(float("inf"), 0.0, 0.0)
    _, pos_t = wind_to_turbine(park_wind(1.0), Vec3(0.0, 0.0, 10.0), (0.0, 0.0))
    with pytest.raises(ValueError, match="Nacelle height"):
        turbine_to_disc(park_wind(1.0), pos_t, 0.0)
