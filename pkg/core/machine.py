"""Single-cage asynchronous machine in two-axis form.

Stationary (stator-fixed) frame, motor sign convention: positive stator
current flows into the machine and positive torque accelerates the shaft.
Space vectors use the amplitude-invariant Clarke transform, so three-phase
power is 1.5 * (u . i).

RMS mode uses :class:`RmsMachine`, a synchronous-frame variant whose stator
equation is algebraic and whose only state is the rotor flux.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

logger = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)
# 90 degree rotation used for the rotational EMF of the rotor winding
J = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class MachineParams:
    rs_ohm: float
    rr_ohm: float
    ls_h: float
    lr_h: float
    lm_h: float
    pole_pairs: int = 2

    def __post_init__(self) -> None:
        if self.rs_ohm <= 0 or self.rr_ohm <= 0:
            raise ValueError(f"Machine resistances must be positive, got Rs={self.rs_ohm}, Rr={self.rr_ohm}")
        if int(self.pole_pairs) != self.pole_pairs or self.pole_pairs < 1:
            raise ValueError(f"Pole pairs must be an integer >= 1, got {self.pole_pairs}")
        det = self.ls_h * self.lr_h - self.lm_h**2
        if self.ls_h <= 0 or self.lr_h <= 0 or det <= 0:
            raise ValueError(
                f"Inductances must satisfy Ls*Lr - Lm^2 > 0 (Ls={self.ls_h}, Lr={self.lr_h}, Lm={self.lm_h})"
            )
        cond = np.linalg.cond(self.inductance_matrix())
        if cond > 1e12:
            raise ValueError(f"Inductance matrix is near-singular (condition {cond:.3g})")

    @property
    def determinant(self) -> float:
        return self.ls_h * self.lr_h - self.lm_h**2

    @property
    def sigma(self) -> float:
        return self.determinant / (self.ls_h * self.lr_h)

    def inductance_matrix(self) -> np.ndarray:
        return np.array([[self.ls_h, self.lm_h], [self.lm_h, self.lr_h]])


@dataclass(frozen=True)
class MachineState:
    psi_s: np.ndarray
    psi_r: np.ndarray

    @classmethod
    def zero(cls) -> "MachineState":
        return cls(np.zeros(2), np.zeros(2))

    @classmethod
    def from_vector(cls, values: np.ndarray) -> "MachineState":
        return cls(np.asarray(values[0:2], dtype=float), np.asarray(values[2:4], dtype=float))

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.psi_s, self.psi_r])


@dataclass(frozen=True)
class MachineInputs:
    u_s: np.ndarray
    omega_el: float
    u_r: np.ndarray = field(default_factory=lambda: np.zeros(2))


def currents_from_flux(state: MachineState, params: MachineParams) -> Tuple[np.ndarray, np.ndarray]:
    det = params.determinant
    i_s = (params.lr_h * state.psi_s - params.lm_h * state.psi_r) / det
    i_r = (params.ls_h * state.psi_r - params.lm_h * state.psi_s) / det
    return i_s, i_r


def flux_from_currents(i_s: np.ndarray, i_r: np.ndarray, params: MachineParams) -> MachineState:
    return MachineState(params.ls_h * i_s + params.lm_h * i_r, params.lm_h * i_s + params.lr_h * i_r)


def machine_derivative(
    state: MachineState,
    inputs: MachineInputs,
    params: MachineParams,
) -> Tuple[np.ndarray, np.ndarray]:
    """Flux derivatives (d psi_s/dt, d psi_r/dt) in the stator frame."""
    i_s, i_r = currents_from_flux(state, params)
    d_psi_s = inputs.u_s - params.rs_ohm * i_s
    d_psi_r = inputs.u_r - params.rr_ohm * i_r - inputs.omega_el * (J @ state.psi_r)
    return d_psi_s, d_psi_r


def cross2(a: np.ndarray, b: np.ndarray) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def electromagnetic_torque(state: MachineState, params: MachineParams) -> float:
    i_s, _ = currents_from_flux(state, params)
    return 1.5 * params.pole_pairs * cross2(state.psi_s, i_s)


def copper_losses(state: MachineState, params: MachineParams) -> float:
    i_s, i_r = currents_from_flux(state, params)
    return 1.5 * (params.rs_ohm * float(i_s @ i_s) + params.rr_ohm * float(i_r @ i_r))


def magnetic_energy(state: MachineState, params: MachineParams) -> float:
    i_s, i_r = currents_from_flux(state, params)
    return 0.75 * (float(state.psi_s @ i_s) + float(state.psi_r @ i_r))


def stator_power(u_s: np.ndarray, i_s: np.ndarray) -> float:
    """Electrical power flowing into the stator terminals."""
    return 1.5 * float(u_s @ i_s)


def clarke(abc: np.ndarray) -> np.ndarray:
    a, b, c = abc
    return np.array([(2.0 / 3.0) * (a - 0.5 * b - 0.5 * c), (b - c) / SQRT3])


def inverse_clarke(alpha_beta: np.ndarray) -> np.ndarray:
    alpha, beta = alpha_beta
    return np.array(
        [
            alpha,
            -0.5 * alpha + 0.5 * SQRT3 * beta,
            -0.5 * alpha - 0.5 * SQRT3 * beta,
        ]
    )


@dataclass(frozen=True)
class SteadyState:
    """Peak phasors of one operating point of the equivalent circuit."""

    slip: float
    omega_s: float
    u_s: complex
    i_s: complex
    i_r: complex
    torque: float

    def fluxes(self, params: MachineParams) -> Tuple[complex, complex]:
        return (
            params.ls_h * self.i_s + params.lm_h * self.i_r,
            params.lm_h * self.i_s + params.lr_h * self.i_r,
        )


def input_impedance(slip: float, f_grid: float, params: MachineParams) -> complex:
    """Per-phase impedance seen at the stator terminals at the given slip."""
    omega_s = 2.0 * math.pi * f_grid
    zs = params.rs_ohm + 1j * omega_s * (params.ls_h - params.lm_h)
    zm = 1j * omega_s * params.lm_h
    if slip == 0:
        return zs + zm
    zr = params.rr_ohm / slip + 1j * omega_s * (params.lr_h - params.lm_h)
    return zs + zm * zr / (zm + zr)


def steady_state_point(slip: float, u_s: complex, f_grid: float, params: MachineParams) -> SteadyState:
    """Solve the per-phase equivalent circuit for the stator phasor ``u_s``."""
    if f_grid <= 0:
        raise ValueError(f"Grid frequency must be positive, got {f_grid}")
    omega_s = 2.0 * math.pi * f_grid
    i_s = u_s / input_impedance(slip, f_grid, params)
    if slip == 0:
        return SteadyState(0.0, omega_s, u_s, i_s, 0j, 0.0)
    i_r = -1j * omega_s * params.lm_h * i_s / (params.rr_ohm / slip + 1j * omega_s * params.lr_h)
    torque = 1.5 * params.pole_pairs * abs(i_r) ** 2 * params.rr_ohm / (slip * omega_s)
    return SteadyState(slip, omega_s, u_s, i_s, i_r, torque)


def steady_state_torque(slip: float, u_mag: float, f_grid: float, params: MachineParams) -> float:
    """Equivalent-circuit torque for a balanced supply of phase peak ``u_mag``."""
    if not -1.0 <= slip <= 1.0:
        raise ValueError(f"Slip must lie in [-1, 1], got {slip}")
    return steady_state_point(slip, complex(u_mag), f_grid, params).torque


class RmsMachine:
    """Synchronous-frame machine with algebraic stator and dynamic rotor flux.

    The stator is a Norton source towards the network: it injects
    ``e_prime / z_prime`` behind the admittance ``1 / z_prime``.
    """

    def __init__(self, params: MachineParams, f_grid: float) -> None:
        self.params = params
        self.omega_s = 2.0 * math.pi * f_grid
        self.l_prime = params.ls_h - params.lm_h**2 / params.lr_h
        self.k_r = params.lm_h / params.lr_h
        self.z_prime = params.rs_ohm + 1j * self.omega_s * self.l_prime
        self.y_prime = 1.0 / self.z_prime

    def back_emf(self, psi_r: complex) -> complex:
        return 1j * self.omega_s * self.k_r * psi_r

    def norton_current(self, psi_r: complex) -> complex:
        """Current injected into the terminal node when the terminal voltage is zero."""
        return self.back_emf(psi_r) * self.y_prime

    def stator_current(self, u_s: complex, psi_r: complex) -> complex:
        return (u_s - self.back_emf(psi_r)) * self.y_prime

    def rotor_current(self, i_s: complex, psi_r: complex) -> complex:
        return (psi_r - self.params.lm_h * i_s) / self.params.lr_h

    def stator_flux(self, i_s: complex, psi_r: complex) -> complex:
        return self.l_prime * i_s + self.k_r * psi_r

    def rotor_flux_derivative(self, psi_r: complex, i_s: complex, omega_el: float) -> complex:
        i_r = self.rotor_current(i_s, psi_r)
        return -self.params.rr_ohm * i_r - 1j * (self.omega_s - omega_el) * psi_r

    def torque(self, i_s: complex, psi_r: complex) -> float:
        psi_s = self.stator_flux(i_s, psi_r)
        return 1.5 * self.params.pole_pairs * (psi_s.conjugate() * i_s).imag

    def losses(self, i_s: complex, psi_r: complex) -> float:
        i_r = self.rotor_current(i_s, psi_r)
        return 1.5 * (self.params.rs_ohm * abs(i_s) ** 2 + self.params.rr_ohm * abs(i_r) ** 2)

    def magnetic_energy(self, i_s: complex, psi_r: complex) -> float:
        i_r = self.rotor_current(i_s, psi_r)
        psi_s = self.stator_flux(i_s, psi_r)
        return 0.75 * ((psi_s.conjugate() * i_s).real + (psi_r.conjugate() * i_r).real)


__all__ = [
    "MachineParams",
    "MachineState",
    "MachineInputs",
    "SteadyState",
    "RmsMachine",
    "currents_from_flux",
    "flux_from_currents",
    "machine_derivative",
    "electromagnetic_torque",
    "copper_losses",
    "magnetic_energy",
    "stator_power",
    "clarke",
    "inverse_clarke",
    "cross2",
    "input_impedance",
    "steady_state_point",
    "steady_state_torque",
]
