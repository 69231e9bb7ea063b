"""Inertias, the elastic shaft and their integration through the engine."""

from __future__ import annotations

import numpy as np
import pytest

from core.drivetrain import (
    GearboxParams,
    InertiaParams,
    InertiaState,
    ShaftPortState,
    gearbox_torques,
    kinetic_energy,
    shaft_dissipation,
    shaft_energy,
    torsion,
    two_mass_step,
)
from engine.integrators import rk4_step
from engine.run import integrate
from engine.scenario import scenario_from_tree
from tests.conftest import get_test_logger
from tests.helpers import drivetrain_tree, inertia_omega, richardson_order, scenario_tree

logger = get_test_logger(__name__)
logger.info("Starting tests for drivetrain module")


def test_parameter_validation() -> None:
    """Non-positive inertia, negative friction/stiffness and zero ratio are rejected."""
    logger.info("Running drivetrain parameter validation test")
    with pytest.raises(ValueError):
        InertiaParams(0.0)
    with pytest.raises(ValueError):
        InertiaParams(1.0, -0.1)
    with pytest.raises(ValueError):
        GearboxParams(-1.0)
    with pytest.raises(ValueError):
        GearboxParams(10.0, 0.0, 0.0)


def test_gearbox_port_torques_balance_and_dissipate() -> None:
    """m1 + n m2 = 0 and the port power splits into spring rate plus damper loss."""
    logger.info("Running gearbox power identity test")
    rng = np.random.default_rng(11)
    gear = GearboxParams(c_nm_per_rad=2.0e3, d_nms_per_rad=35.0, n=7.5)
    for delta1, delta2, omega1, omega2 in rng.normal(size=(20, 4)):
        port = ShaftPortState(delta1, delta2, omega1, omega2)
        m1, m2 = gearbox_torques(port, gear)
        eps, eps_dot = torsion(port, gear)
        assert m1 + gear.n * m2 == pytest.approx(0.0, abs=1e-9)
        absorbed = -(m1 * omega1 + m2 * omega2)
        assert absorbed - gear.c_nm_per_rad * eps * eps_dot == pytest.approx(shaft_dissipation(port, gear), rel=1e-9, abs=1e-9)


def test_single_inertia_matches_closed_form() -> None:
    """Constant torque against viscous friction follows the exponential response."""
    logger.info("Running single inertia oracle test")
    tree = scenario_tree(dt=0.01, duration=50.0, drivetrain=drivetrain_tree(theta=100.0, kf=10.0, applied=50.0))
    out = integrate(scenario_from_tree(tree))
    expected = np.array([inertia_omega(100.0, 10.0, 50.0, 0.0, t) for t in out.time])
    assert np.max(np.abs(out.columns["omega_rotor"] - expected)) <= 1e-6 * 5.0
    assert out.columns["omega_rotor"][-1] == pytest.approx(5.0 * (1.0 - np.exp(-5.0)), rel=1e-6)


def test_undamped_two_mass_conserves_energy() -> None:
    """Kinetic plus spring energy stays constant without friction or damping."""
    logger.info("Running two-mass energy conservation test")
    inertias = (InertiaParams(1.0), InertiaParams(1.0))
    gear = GearboxParams(c_nm_per_rad=100.0, d_nms_per_rad=0.0, n=1.0)

    def _energy(x: np.ndarray) -> float:
        states = (InertiaState(x[0], x[1]), InertiaState(x[2], x[3]))
        return kinetic_energy(states, inertias) + shaft_energy(ShaftPortState.from_inertias(*states), gear)

    def _rhs(_: float, x: np.ndarray) -> np.ndarray:
        states = (InertiaState(x[0], x[1]), InertiaState(x[2], x[3]))
        return np.array(two_mass_step(states, inertias, gear, (0.0, 0.0)).as_tuple())

    x = np.array([0.0, 1.0, 0.0, 0.0])
    start = _energy(x)
    dt = 1e-3
    for k in range(10_000):
        x = rk4_step(_rhs, k * dt, x, dt)
    assert abs(_energy(x) - start) <= 1e-6 * start
    # momentum of the free pair is conserved too
    assert x[1] + x[3] == pytest.approx(1.0, abs=1e-9)


def test_rk4_shows_fourth_order_convergence() -> None:
    """Observed Richardson order of the damped two-mass drivetrain is four."""
    logger.info("Running Richardson order test")
    finals = []
    for dt in (0.02, 0.01, 0.005):
        tree = scenario_tree(
            dt=dt,
            duration=2.0,
            drivetrain=drivetrain_tree(
                theta=1.0, kf=0.1, applied=1.0, generator=(1.0, 0.05, -0.5), gearbox=(25.0, 0.5, 2.0)
            ),
        )
        out = integrate(scenario_from_tree(tree))
        finals.append(np.array([out.final(name) for name in ("delta_rotor", "omega_rotor", "delta_gen", "omega_gen")]))
    order = richardson_order(*finals)
    logger.info("Observed order %.3f", order)
    assert order == pytest.approx(4.0, abs=0.2)
