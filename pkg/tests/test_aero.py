"""cp-lambda rotor: tip-speed ratio, power coefficient, torque and the cp table CSV."""

from __future__ import annotations

import math
from pathlib import Path

import pytest

from core.aero import (
    RotorParams,
    aerodynamic_power,
    aerodynamic_torque,
    load_cp_table,
    power_coefficient,
    tip_speed_ratio,
)
from tests.conftest import get_test_logger

logger = get_test_logger(__name__)
logger.info("Starting tests for aero module")

V27_TABLE = (
    (0.0, 0.0), (2.0, 0.05), (3.0, 0.15), (4.0, 0.28), (5.0, 0.38), (6.0, 0.43), (7.0, 0.44),
    (8.0, 0.42), (9.0, 0.38), (10.0, 0.32), (11.0, 0.25), (12.0, 0.17), (14.0, 0.0),
)


@pytest.fixture
def rotor() -> RotorParams:
    return RotorParams(radius_m=13.5, air_density_kgm3=1.225, cp_table=V27_TABLE)


def test_tip_speed_ratio_and_edge_cases(rotor: RotorParams) -> None:
    """lambda = omega R / v, infinite without wind, negative inputs rejected."""
    logger.info("Running tip speed ratio test")
    assert tip_speed_ratio(2.0, 10.0, rotor) == pytest.approx(2.7)
    assert math.isinf(tip_speed_ratio(2.0, 0.0, rotor))
    with pytest.raises(ValueError):
        tip_speed_ratio(-1.0, 10.0, rotor)
    with pytest.raises(ValueError):
        tip_speed_ratio(1.0, -10.0, rotor)


def test_power_coefficient_interpolates_and_vanishes_outside(rotor: RotorParams) -> None:
    """Linear interpolation between knots, zero beyond the table."""
    logger.info("Running power coefficient interpolation test")
    assert power_coefficient(6.5, rotor) == pytest.approx(0.435)
    assert power_coefficient(7.0, rotor) == pytest.approx(0.44)
    assert power_coefficient(20.0, rotor) == 0.0
    assert power_coefficient(math.inf, rotor) == 0.0


def test_power_and_torque_follow_cp(rotor: RotorParams) -> None:
    """P = rho A cp v^3 / 2 and M = P / omega at an operating point."""
    logger.info("Running aerodynamic power/torque test")
    v, omega = 10.0, 4.5
    cp = power_coefficient(omega * 13.5 / v, rotor)
    expected = 0.5 * 1.225 * math.pi * 13.5**2 * cp * v**3
    assert aerodynamic_power(v, omega, rotor) == pytest.approx(expected)
    assert aerodynamic_torque(v, omega, rotor) == pytest.approx(expected / omega)
    assert aerodynamic_torque(0.0, omega, rotor) == 0.0


def test_standstill_torque_is_the_small_speed_limit(rotor: RotorParams) -> None:
    """Torque at omega = 0 matches the limit of P/omega for omega -> 0."""
    logger.info("Running standstill torque continuity test")
    at_rest = aerodynamic_torque(8.0, 0.0, rotor)
    creeping = aerodynamic_torque(8.0, 1e-6, rotor)
    assert at_rest > 0
    assert creeping == pytest.approx(at_rest, rel=1e-6)


@pytest.mark.parametrize(
    "table",
    [
        ((0.0, 0.0),),
        ((0.0, 0.0), (5.0, 0.7)),
        ((0.0, 0.0), (5.0, 0.4), (4.0, 0.3)),
        ((-1.0, 0.0), (5.0, 0.4)),
    ],
)
def test_rotor_params_reject_bad_tables(table) -> None:
    """Short, super-Betz, unordered or negative-lambda tables fail."""
    logger.info("Running cp table validation test for %s", table)
    with pytest.raises(ValueError):
        RotorParams(radius_m=10.0, cp_table=table)


def test_load_cp_table_reads_shipped_csv(config_dir: Path) -> None:
    """The illustrative table loads with its header and comment line."""
    logger.info("Running cp table CSV loading test")
    table = load_cp_table(config_dir / "cp_v27_illustrative.csv")
    flat = [value for knot in table for value in knot]
    assert flat == pytest.approx([value for knot in V27_TABLE for value in knot])
    RotorParams(radius_m=13.5, cp_table=table)
