"""Reference solutions and numerical yardsticks for the physics tests."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from core.grid import phase_voltages
from core.machine import (
    MachineInputs,
    MachineParams,
    MachineState,
    clarke,
    electromagnetic_torque,
    machine_derivative,
)
from engine.integrators import rk4_step

__all__ = [
    "constant_slip_torque",
    "dft_phasor",
    "inertia_omega",
    "richardson_order",
]


def constant_slip_torque(
    params: MachineParams,
    slip: float,
    u_peak: float,
    f_grid: float = 50.0,
    *,
    dt: float = 2e-4,
    duration: float = 1.5,
    window: float = 0.2,
) -> float:
    """Mean torque over the last ``window`` seconds of a start from zero flux.

    The rotor is held at constant speed and the stator sees an ideal
    balanced source of phase peak ``u_peak``.
    """
    omega_s = 2.0 * math.pi * f_grid
    omega_el = (1.0 - slip) * omega_s

    def _rhs(t: float, x: np.ndarray) -> np.ndarray:
        u_s = clarke(phase_voltages(u_peak, omega_s * t))
        d_psi_s, d_psi_r = machine_derivative(MachineState(x[:2], x[2:]), MachineInputs(u_s, omega_el), params)
        return np.concatenate([d_psi_s, d_psi_r])

    n_steps = int(round(duration / dt))
    n_window = int(round(window / dt))
    x = np.zeros(4)
    torques = []
    for k in range(n_steps):
        x = rk4_step(_rhs, k * dt, x, dt)
        if k >= n_steps - n_window:
            torques.append(electromagnetic_torque(MachineState(x[:2], x[2:]), params))
    return float(np.mean(torques))


def inertia_omega(theta: float, kf: float, torque: float, omega0: float, t: float) -> float:
    """Closed-form speed of a single inertia under constant torque and viscous friction."""
    if kf == 0:
        return omega0 + torque * t / theta
    final = torque / kf
    return final + (omega0 - final) * math.exp(-kf * t / theta)


def dft_phasor(samples: Sequence[float], times: Sequence[float], f: float) -> complex:
    """Peak phasor X with samples ~ Re(X exp(j 2 pi f t)); use whole cycles only."""
    x = np.asarray(samples, dtype=float)
    t = np.asarray(times, dtype=float)
    return complex(2.0 / len(x) * np.sum(x * np.exp(-2j * math.pi * f * t)))


def richardson_order(coarse: np.ndarray, medium: np.ndarray, fine: np.ndarray) -> float:
    """Observed order of convergence from three solutions at h, h/2, h/4."""
    first = float(np.linalg.norm(np.asarray(coarse) - np.asarray(medium)))
    second = float(np.linalg.norm(np.asarray(medium) - np.asarray(fine)))
    return math.log2(first / second)
