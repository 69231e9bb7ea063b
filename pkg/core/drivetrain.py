"""Rotating inertias with viscous friction and the elastic shaft/gearbox coupling."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple


@dataclass(frozen=True)
class InertiaParams:
    theta_kgm2: float
    kf_nms: float = 0.0

    def __post_init__(self) -> None:
        if self.theta_kgm2 <= 0:
            raise ValueError(f"Inertia must be positive, got {self.theta_kgm2}")
        if self.kf_nms < 0:
            raise ValueError(f"Friction factor must be >= 0, got {self.kf_nms}")


@dataclass(frozen=True)
class InertiaState:
    delta: float = 0.0
    omega: float = 0.0


@dataclass(frozen=True)
class GearboxParams:
    c_nm_per_rad: float
    d_nms_per_rad: float = 0.0
    n: float = 1.0

    def __post_init__(self) -> None:
        if self.c_nm_per_rad < 0:
            raise ValueError(f"Shaft stiffness must be >= 0, got {self.c_nm_per_rad}")
        if self.d_nms_per_rad < 0:
            raise ValueError(f"Shaft damping must be >= 0, got {self.d_nms_per_rad}")
        if self.n == 0:
            raise ValueError("Gear ratio n must be non-zero")


@dataclass(frozen=True)
class ShaftPortState:
    delta1: float = 0.0
    delta2: float = 0.0
    omega1: float = 0.0
    omega2: float = 0.0

    @classmethod
    def from_inertias(cls, first: InertiaState, second: InertiaState) -> "ShaftPortState":
        return cls(first.delta, second.delta, first.omega, second.omega)


def inertia_derivative(state: InertiaState, torque_sum: float, params: InertiaParams) -> Tuple[float, float]:
    """Return (d delta/dt, d omega/dt) of a stiff rotating inertia."""
    return state.omega, (-params.kf_nms * state.omega + torque_sum) / params.theta_kgm2


def torsion(state: ShaftPortState, params: GearboxParams) -> Tuple[float, float]:
    """Shaft twist seen from the low-speed side and its rate."""
    return state.delta1 - state.delta2 / params.n, state.omega1 - state.omega2 / params.n


def gearbox_torques(state: ShaftPortState, params: GearboxParams) -> Tuple[float, float]:
    """Port torques (m1, m2) of the shaft on the low- and high-speed inertia.

    Coupling matrix rows are [-1, 1/n] and [1/n, -1/n^2] so that an undamped
    gear transmits power without loss: m1 + n*m2 == 0.
    """
    eps, eps_dot = torsion(state, params)
    m1 = -(params.c_nm_per_rad * eps + params.d_nms_per_rad * eps_dot)
    return m1, -m1 / params.n


def shaft_energy(state: ShaftPortState, params: GearboxParams) -> float:
    eps, _ = torsion(state, params)
    return 0.5 * params.c_nm_per_rad * eps * eps


def shaft_dissipation(state: ShaftPortState, params: GearboxParams) -> float:
    """Power dissipated in the shaft damper, d * eps_dot^2."""
    _, eps_dot = torsion(state, params)
    return params.d_nms_per_rad * eps_dot * eps_dot


@dataclass(frozen=True)
class TwoMassDerivative:
    d_delta1: float
    d_omega1: float
    d_delta2: float
    d_omega2: float

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return self.d_delta1, self.d_omega1, self.d_delta2, self.d_omega2


def two_mass_step(
    states: Tuple[InertiaState, InertiaState],
    inertias: Tuple[InertiaParams, InertiaParams],
    shaft: GearboxParams,
    external: Tuple[float, float],
) -> TwoMassDerivative:
    """Derivatives of the rotor/generator pair joined by the shaft."""
    first, second = states
    m1, m2 = gearbox_torques(ShaftPortState.from_inertias(first, second), shaft)
    d_delta1, d_omega1 = inertia_derivative(first, external[0] + m1, inertias[0])
    d_delta2, d_omega2 = inertia_derivative(second, external[1] + m2, inertias[1])
    return TwoMassDerivative(d_delta1, d_omega1, d_delta2, d_omega2)


def kinetic_energy(states: Tuple[InertiaState, ...], inertias: Tuple[InertiaParams, ...]) -> float:
    return sum(0.5 * p.theta_kgm2 * s.omega * s.omega for s, p in zip(states, inertias))


__all__ = [
    "InertiaParams",
    "InertiaState",
    "GearboxParams",
    "ShaftPortState",
    "TwoMassDerivative",
    "inertia_derivative",
    "torsion",
    "gearbox_torques",
    "shaft_energy",
    "shaft_dissipation",
    "two_mass_step",
    "kinetic_energy",
]
