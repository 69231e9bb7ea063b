"""Induction machine: two-axis flux model, equivalent circuit and the RMS variant."""

from __future__ import annotations

import math

import numpy as np
import pytest

from core.grid import balanced_set
from core.machine import (
    MachineInputs,
    MachineParams,
    MachineState,
    RmsMachine,
    clarke,
    copper_losses,
    currents_from_flux,
    electromagnetic_torque,
    flux_from_currents,
    inverse_clarke,
    machine_derivative,
    stator_power,
    steady_state_point,
    steady_state_torque,
)
from engine.integrators import rk4_step
from tests.conftest import get_test_logger
from tests.helpers import constant_slip_torque

logger = get_test_logger(__name__)
logger.info("Starting tests for machine module")

U_PEAK = 325.0
F_GRID = 50.0


def test_params_reject_non_physical_inductances() -> None:
    """Ls Lr <= Lm^2, non-positive resistances and fractional pole pairs fail."""
    logger.info("Running machine parameter validation test")
    with pytest.raises(ValueError, match="Ls\\*Lr"):
        MachineParams(0.5, 0.6, 0.1, 0.1, 0.1)
    with pytest.raises(ValueError):
        MachineParams(0.0, 0.6, 0.105, 0.105, 0.1)
    with pytest.raises(ValueError):
        MachineParams(0.5, 0.6, 0.105, 0.105, 0.1, pole_pairs=1.5)


def test_clarke_transform_is_amplitude_invariant() -> None:
    """A balanced set of peak U maps to a space vector of length U and back."""
    logger.info("Running Clarke transform test")
    abc = np.real(balanced_set(U_PEAK * np.exp(0.3j)))
    vector = clarke(abc)
    assert math.hypot(*vector) == pytest.approx(U_PEAK)
    assert inverse_clarke(vector) == pytest.approx(abc)


def test_flux_current_maps_are_inverse(test_machine: MachineParams) -> None:
    """Currents recovered from fluxes reproduce the fluxes."""
    logger.info("Running flux/current inversion test")
    i_s, i_r = np.array([12.0, -3.0]), np.array([-9.5, 4.0])
    state = flux_from_currents(i_s, i_r, test_machine)
    back_s, back_r = currents_from_flux(state, test_machine)
    assert back_s == pytest.approx(i_s)
    assert back_r == pytest.approx(i_r)


def test_power_balance_of_the_flux_model(test_machine: MachineParams) -> None:
    """Stator power = copper loss + mechanical power + rate of magnetic energy."""
    logger.info("Running machine power balance test")
    rng = np.random.default_rng(5)
    omega_m = 150.0
    for _ in range(10):
        state = MachineState(rng.normal(size=2), rng.normal(size=2))
        u_s = rng.normal(scale=300.0, size=2)
        d_psi_s, d_psi_r = machine_derivative(state, MachineInputs(u_s, test_machine.pole_pairs * omega_m), test_machine)
        i_s, i_r = currents_from_flux(state, test_machine)
        d_magnetic = 1.5 * (float(i_s @ d_psi_s) + float(i_r @ d_psi_r))
        mechanical = electromagnetic_torque(state, test_machine) * omega_m
        balance = copper_losses(state, test_machine) + mechanical + d_magnetic
        assert stator_power(u_s, i_s) == pytest.approx(balance, rel=1e-9, abs=1e-9)


def test_steady_state_torque_signs(test_machine: MachineParams) -> None:
    """Motoring above zero slip, generating below, nothing at synchronism."""
    logger.info("Running steady-state torque sign test")
    assert steady_state_torque(0.0, U_PEAK, F_GRID, test_machine) == 0.0
    assert steady_state_torque(0.02, U_PEAK, F_GRID, test_machine) > 0.0
    assert steady_state_torque(-0.02, U_PEAK, F_GRID, test_machine) < 0.0
    with pytest.raises(ValueError):
        steady_state_torque(1.5, U_PEAK, F_GRID, test_machine)


@pytest.mark.parametrize("slip", [0.01, 0.03, -0.03])
def test_dynamic_model_settles_to_equivalent_circuit_torque(test_machine: MachineParams, slip: float) -> None:
    """Started from zero flux at constant slip, the mean torque matches the circuit within 2 %."""
    logger.info("Running constant-slip torque test at slip %.3f", slip)
    expected = steady_state_torque(slip, U_PEAK, F_GRID, test_machine)
    simulated = constant_slip_torque(test_machine, slip, U_PEAK, F_GRID)
    logger.info("Torque simulated %.4f, expected %.4f", simulated, expected)
    assert simulated == pytest.approx(expected, rel=0.02)


@pytest.mark.parametrize("slip", [0.02, -0.01])
def test_rms_machine_is_stationary_at_the_circuit_operating_point(test_machine: MachineParams, slip: float) -> None:
    """Rotor-flux derivative vanishes and currents/torque agree with the circuit."""
    logger.info("Running RMS machine steady-state test at slip %.3f", slip)
    point = steady_state_point(slip, complex(U_PEAK), F_GRID, test_machine)
    _, psi_r = point.fluxes(test_machine)
    rms = RmsMachine(test_machine, F_GRID)
    omega_el = (1.0 - slip) * 2.0 * math.pi * F_GRID

    i_s = rms.stator_current(complex(U_PEAK), psi_r)
    assert abs(i_s - point.i_s) <= 1e-9 * abs(point.i_s)
    assert abs(rms.rotor_current(i_s, psi_r) - point.i_r) <= 1e-9 * abs(point.i_r)
    assert abs(rms.rotor_flux_derivative(psi_r, i_s, omega_el)) <= 1e-9 * abs(psi_r) * omega_el
    assert rms.torque(i_s, psi_r) == pytest.approx(point.torque, rel=1e-9)
    # Norton form: stator current equals admittance current minus the injected source
    assert rms.stator_current(0j, psi_r) == pytest.approx(-rms.norton_current(psi_r))


def test_rms_losses_match_air_gap_balance(test_machine: MachineParams) -> None:
    """At steady state, stator power = copper loss + torque * mechanical speed."""
    logger.info("Running RMS machine power balance test")
    slip = 0.03
    point = steady_state_point(slip, complex(U_PEAK), F_GRID, test_machine)
    _, psi_r = point.fluxes(test_machine)
    rms = RmsMachine(test_machine, F_GRID)
    i_s = rms.stator_current(complex(U_PEAK), psi_r)
    p_in = 1.5 * (complex(U_PEAK) * i_s.conjugate()).real
    omega_m = (1.0 - slip) * 2.0 * math.pi * F_GRID / test_machine.pole_pairs
    assert p_in == pytest.approx(rms.losses(i_s, psi_r) + rms.torque(i_s, psi_r) * omega_m, rel=1e-9)


def test_locked_rotor_dc_equilibrium_is_resistive(test_machine: MachineParams) -> None:
    """At standstill with DC stator voltage the fluxes are at rest when i_s = u_s / Rs and i_r = 0."""
    logger.info("Running locked-rotor DC equilibrium test")
    u_s = np.array([60.0, -80.0])
    state = flux_from_currents(u_s / test_machine.rs_ohm, np.zeros(2), test_machine)
    d_psi_s, d_psi_r = machine_derivative(state, MachineInputs(u_s, 0.0), test_machine)
    assert np.max(np.abs(d_psi_s)) <= 1e-12 * np.max(np.abs(u_s))
    assert np.max(np.abs(d_psi_r)) <= 1e-12 * np.max(np.abs(u_s))
    assert electromagnetic_torque(state, test_machine) == pytest.approx(0.0, abs=1e-9)


def test_locked_rotor_dc_transient_settles_without_torque(test_machine: MachineParams) -> None:
    """From an arbitrary flux the locked machine under DC reaches u_s = Rs i_s and zero torque."""
    logger.info("Running locked-rotor DC transient test")
    u_s = np.array([60.0, -80.0])
    inputs = MachineInputs(u_s, 0.0)

    def _rhs(_t: float, x: np.ndarray) -> np.ndarray:
        return np.concatenate(machine_derivative(MachineState(x[:2], x[2:]), inputs, test_machine))

    x = np.array([0.3, -0.2, -0.1, 0.4])
    initial_torque = electromagnetic_torque(MachineState(x[:2], x[2:]), test_machine)
    assert abs(initial_torque) > 1.0
    dt = 2e-3
    # slowest locked-rotor time constant of the test machine is about 0.38 s
    for k in range(5000):
        x = rk4_step(_rhs, k * dt, x, dt)
    state = MachineState(x[:2], x[2:])
    i_s, i_r = currents_from_flux(state, test_machine)
    assert test_machine.rs_ohm * i_s == pytest.approx(u_s, rel=1e-8)
    assert np.max(np.abs(i_r)) <= 1e-8 * np.max(np.abs(i_s))
    assert electromagnetic_torque(state, test_machine) == pytest.approx(0.0, abs=1e-6 * abs(initial_torque))
