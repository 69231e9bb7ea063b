"""Coupled state-space system: wind -> rotor -> drivetrain -> machine -> grid.

Evaluation order inside one derivative call is fixed:

1. rotor-effective wind (zero-order hold on the synthesised series),
2. aerodynamic torque,
3. shaft/gearbox port torques,
4. machine (transient: flux ODE on the node voltage; RMS: network phasor
   solve with the machine as a Norton equivalent, then the rotor-flux ODE),
5. inertia derivatives,
6. line segment (transient mode only),
7. energy-audit quadratures.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from core.aero import aerodynamic_torque, power_coefficient, tip_speed_ratio
from core.drivetrain import (
    InertiaState,
    ShaftPortState,
    gearbox_torques,
    inertia_derivative,
    kinetic_energy,
    shaft_energy,
    torsion,
    two_mass_step,
)
from core.geometry import FrameAngles, Vec3, disc_to_rotor, park_wind, turbine_to_disc, wind_to_turbine
from core.grid import (
    LineSegment,
    LineSegmentState,
    RmsSolution,
    balanced_set,
    instantaneous,
    phase_voltages,
    rms_phasor_solve,
)
from core.machine import (
    MachineInputs,
    MachineState,
    RmsMachine,
    clarke,
    cross2,
    currents_from_flux,
    input_impedance,
    inverse_clarke,
    machine_derivative,
    magnetic_energy,
    steady_state_point,
)
from windfield.core import WindSeries

from .layout import (
    AUDIT_BLOCK,
    AUDIT_RMS,
    AUDIT_TRANSIENT,
    DRIVETRAIN_COLUMNS,
    GEARBOX_COLUMNS,
    GRID_COLUMNS,
    MACHINE_COLUMNS,
    WIND_COLUMNS,
    SimState,
    StateLayout,
)
from .scenario import Scenario

logger = logging.getLogger(__name__)

GRID_STATES = ("grid_i_a", "grid_i_b", "grid_i_c", "grid_u_a", "grid_u_b", "grid_u_c")


@dataclass(frozen=True)
class StoredEnergy:
    kinetic: float = 0.0
    spring: float = 0.0
    magnetic: float = 0.0
    grid: float = 0.0


class System:
    """Right-hand side, observation and initial state of one scenario."""

    def __init__(self, scenario: Scenario, env: Optional[WindSeries] = None) -> None:
        if scenario.turbine is not None and env is None:
            raise ValueError("A turbine scenario needs the synthesised wind series")
        self.scenario = scenario
        self.env = env
        self.rms = scenario.mode == "rms"
        self.drivetrain = scenario.drivetrain
        self.two_mass = self.drivetrain is not None and self.drivetrain.two_mass
        self.machine = scenario.machine
        self.grid = scenario.grid
        self.turbine = scenario.turbine

        self.segment: Optional[LineSegment] = None
        self.rms_machine: Optional[RmsMachine] = None
        if self.grid is not None:
            self.segment = LineSegment(self.grid.segment, self.grid.shunt)
            self.f_grid = self.grid.source.frequency_hz
            self.load_admittance = self.grid.shunt.admittance(self.f_grid)
            if self.machine is not None and self.rms:
                self.rms_machine = RmsMachine(self.machine.params, self.f_grid)

        self._v_eff: Optional[np.ndarray] = None
        if self.turbine is not None and env is not None:
            self._v_eff = self._rotor_effective_series(env)

        machine_names: Tuple[str, ...] = ()
        if self.machine is not None:
            machine_names = ("psi_r_re", "psi_r_im") if self.rms else (
                "psi_s_alpha", "psi_s_beta", "psi_r_alpha", "psi_r_beta",
            )
        drivetrain_names: Tuple[str, ...] = ()
        if self.drivetrain is not None:
            drivetrain_names = ("delta_rotor", "omega_rotor")
            if self.two_mass:
                drivetrain_names += ("delta_gen", "omega_gen")
        self.layout = StateLayout.build(
            [
                ("drivetrain", drivetrain_names),
                ("machine", machine_names),
                ("grid", GRID_STATES if self.grid is not None and not self.rms else ()),
                (AUDIT_BLOCK, AUDIT_RMS if self.rms else AUDIT_TRANSIENT),
            ]
        )
        self._ix = self.layout.index

    # --- wind ---------------------------------------------------------------

    def _rotor_effective_series(self, env: WindSeries) -> np.ndarray:
        """Mean of the grid points inside the rotor disc, else the nearest point."""
        spec = self.scenario.wind
        radii = []
        for point in spec.points:
            _, pos_t = wind_to_turbine(park_wind(0.0), point.position, self.turbine.position_xy)
            _, pos_d = turbine_to_disc(park_wind(0.0), pos_t, spec.nacelle_height_m)
            radii.append(math.hypot(pos_d.x, pos_d.z))
        radii_arr = np.array(radii)
        inside = radii_arr <= self.turbine.rotor.radius_m
        if not np.any(inside):
            inside = radii_arr == radii_arr.min()
        logger.info("Rotor-effective wind averages %d of %d grid points", int(inside.sum()), len(radii))
        return env.samples[inside].mean(axis=0)

    def wind_speed(self, t: float) -> float:
        if self._v_eff is None:
            return 0.0
        duration = self.env.duration_s
        if t > duration * (1.0 + 1e-9):
            raise ValueError(f"t={t} s lies beyond the wind series ({duration} s)")
        index = min(int(math.floor(t / self.env.dt + 1e-9)), len(self._v_eff) - 1)
        return max(float(self._v_eff[index]), 0.0)

    # --- core evaluation ----------------------------------------------------

    def _machine_omega(self, x: np.ndarray) -> float:
        if self.drivetrain is None:
            return 0.0
        return float(x[self._ix["omega_gen"]] if self.two_mass else x[self._ix["omega_rotor"]])

    def _rms_network(self, t: float, psi_r: complex) -> RmsSolution:
        sending = balanced_set(self.grid.source.phasor(t))
        if self.rms_machine is None:
            return rms_phasor_solve(sending, self.load_admittance, self.grid.segment, self.f_grid, segment=self.segment)
        injection = balanced_set(self.rms_machine.norton_current(psi_r))
        return rms_phasor_solve(
            sending,
            self.load_admittance,
            self.grid.segment,
            self.f_grid,
            injection=injection,
            balanced_admittance=self.rms_machine.y_prime,
            segment=self.segment,
        )

    def _rms_grid_losses(self, solution: RmsSolution) -> float:
        z_seq = self.segment.series_impedance_seq(self.f_grid)
        y_seq = self.segment.shunt_admittance_seq(self.f_grid)
        series = 1.5 * float(np.sum(z_seq.real * np.abs(solution.line_current_seq) ** 2))
        shunt = 1.5 * float(np.sum(y_seq.real * np.abs(solution.receiving_seq) ** 2))
        load = 0.5 * float(np.sum(self.load_admittance.real * np.abs(solution.receiving) ** 2))
        return series + shunt + load

    def evaluate(self, t: float, x: np.ndarray, observe: bool = False) -> Tuple[np.ndarray, Dict[str, float]]:
        """Return (dx/dt, signals); signals are filled only when ``observe`` is set."""
        ix = self._ix
        dx = np.zeros_like(x)
        audit: Dict[str, float] = {}
        signals: Dict[str, float] = {}

        omega1 = float(x[ix["omega_rotor"]]) if self.drivetrain is not None else 0.0
        omega2 = float(x[ix["omega_gen"]]) if self.two_mass else 0.0
        omega_m = self._machine_omega(x)

        # 1-2. wind and rotor
        m_aero = 0.0
        v = 0.0
        if self.turbine is not None:
            v = self.wind_speed(t)
            m_aero = aerodynamic_torque(v, max(omega1, 0.0), self.turbine.rotor)

        # 3. shaft
        m1 = m2 = eps_dot = 0.0
        port: Optional[ShaftPortState] = None
        if self.two_mass:
            port = ShaftPortState(x[ix["delta_rotor"]], x[ix["delta_gen"]], omega1, omega2)
            m1, m2 = gearbox_torques(port, self.drivetrain.gearbox)
            _, eps_dot = torsion(port, self.drivetrain.gearbox)

        # 4. machine and (RMS) network
        te = 0.0
        solution: Optional[RmsSolution] = None
        u_node = i_line = None
        if self.grid is not None and not self.rms:
            block = self.layout.block("grid").slice
            i_line = x[block][:3]
            u_node = x[block][3:]
        i_s_abc = np.zeros(3)
        if self.machine is not None:
            params = self.machine.params
            omega_el = params.pole_pairs * omega_m
            mblock = x[self.layout.block("machine").slice]
            if self.rms:
                psi_r = complex(mblock[0], mblock[1])
                solution = self._rms_network(t, psi_r)
                u_s = complex(solution.receiving_seq[1])
                u_neg = complex(solution.receiving_seq[2])
                rm = self.rms_machine
                i_s = rm.stator_current(u_s, psi_r)
                te = rm.torque(i_s, psi_r)
                d_psi_r = rm.rotor_flux_derivative(psi_r, i_s, omega_el)
                dx[self.layout.block("machine").slice] = (d_psi_r.real, d_psi_r.imag)
                # negative-sequence current through the transient admittance is dissipated
                neg_power = 1.5 * rm.y_prime.real * abs(u_neg) ** 2
                p_stator = 1.5 * (u_s * i_s.conjugate()).real + neg_power
                audit["e_machine_loss"] = rm.losses(i_s, psi_r) + neg_power
                audit["e_machine_storage"] = 1.5 * (rm.rotor_current(i_s, psi_r).conjugate() * d_psi_r).real
                if observe:
                    signals["is_mag"] = abs(i_s)
                    signals["q_stator"] = 1.5 * (u_s * i_s.conjugate()).imag
            else:
                state = MachineState(mblock[0:2], mblock[2:4])
                i_s_vec, i_r_vec = currents_from_flux(state, params)
                u_s_vec = clarke(u_node)
                te = 1.5 * params.pole_pairs * cross2(state.psi_s, i_s_vec)
                d_psi_s, d_psi_r = machine_derivative(state, MachineInputs(u_s_vec, omega_el), params)
                dx[self.layout.block("machine").slice] = np.concatenate([d_psi_s, d_psi_r])
                i_s_abc = inverse_clarke(i_s_vec)
                p_stator = 1.5 * float(u_s_vec @ i_s_vec)
                audit["e_machine_loss"] = 1.5 * (
                    params.rs_ohm * float(i_s_vec @ i_s_vec) + params.rr_ohm * float(i_r_vec @ i_r_vec)
                )
                if observe:
                    signals["is_mag"] = float(np.hypot(*i_s_vec))
                    signals["q_stator"] = 1.5 * float(u_s_vec[1] * i_s_vec[0] - u_s_vec[0] * i_s_vec[1])
            audit["e_stator_in"] = p_stator
            audit["e_em_mech"] = te * omega_m
            if observe:
                omega_s = self.grid.source.omega(t)
                signals["m_em"] = te
                signals["slip"] = (omega_s - omega_el) / omega_s
                signals["p_stator"] = p_stator
        elif self.grid is not None and self.rms:
            solution = self._rms_network(t, 0j)

        # 5. inertias
        if self.drivetrain is not None:
            dtr = self.drivetrain
            first = InertiaState(float(x[ix["delta_rotor"]]), omega1)
            if self.two_mass:
                second = InertiaState(float(x[ix["delta_gen"]]), omega2)
                deriv = two_mass_step(
                    (first, second),
                    (dtr.rotor, dtr.generator),
                    dtr.gearbox,
                    (m_aero + dtr.applied_rotor_nm, dtr.applied_generator_nm + te),
                )
                dx[ix["delta_rotor"]], dx[ix["omega_rotor"]], dx[ix["delta_gen"]], dx[ix["omega_gen"]] = deriv.as_tuple()
            else:
                dx[ix["delta_rotor"]], dx[ix["omega_rotor"]] = inertia_derivative(
                    first, m_aero + dtr.applied_rotor_nm + te, dtr.rotor
                )
            audit["e_aero"] = m_aero * omega1
            audit["e_applied"] = dtr.applied_rotor_nm * omega1 + dtr.applied_generator_nm * omega2
            friction = dtr.rotor.kf_nms * omega1 * omega1
            if self.two_mass:
                friction += dtr.generator.kf_nms * omega2 * omega2
                audit["e_damping"] = dtr.gearbox.d_nms_per_rad * eps_dot * eps_dot
            audit["e_friction"] = friction

        # 6. line segment
        if self.grid is not None and not self.rms:
            source = self.grid.source
            u_far = phase_voltages(source.amplitude(t), source.theta(t))
            i_injected = -i_s_abc - i_line
            seg_state = LineSegmentState(i_line, u_node)
            di, du = self.segment.derivative(seg_state, u_far, i_injected)
            dx[self.layout.block("grid").slice] = np.concatenate([di, du])
            audit["e_grid_loss"] = self.segment.losses(seg_state)
            audit["e_source_out"] = float(u_far @ i_line)
            if observe:
                for k, phase in enumerate("abc"):
                    signals[f"u_{phase}"] = float(u_node[k])
                    signals[f"i_{phase}"] = float(i_line[k])
                signals["u_mag"] = float(np.hypot(*clarke(u_node)))
        elif solution is not None:
            sending = balanced_set(self.grid.source.phasor(t))
            audit["e_grid_loss"] = self._rms_grid_losses(solution)
            audit["e_source_out"] = -solution.sending_power(sending)
            if observe:
                angle = self.grid.source.omega_nominal * t
                u_inst = instantaneous(solution.receiving, angle)
                i_inst = -instantaneous(solution.line_current, angle)
                for k, phase in enumerate("abc"):
                    signals[f"u_{phase}"] = float(u_inst[k])
                    signals[f"i_{phase}"] = float(i_inst[k])
                signals["u_mag"] = abs(complex(solution.receiving_seq[1]))

        # 7. audit
        block = self.layout.block(AUDIT_BLOCK)
        for offset, name in enumerate(block.names):
            dx[block.start + offset] = audit.get(name, 0.0)

        if observe:
            signals.update(self._mechanical_signals(x, v, m_aero, omega1, port))
        return dx, signals

    def _mechanical_signals(
        self,
        x: np.ndarray,
        v: float,
        m_aero: float,
        omega1: float,
        port: Optional[ShaftPortState],
    ) -> Dict[str, float]:
        ix = self._ix
        out: Dict[str, float] = {}
        if self.drivetrain is not None:
            out["omega_rotor"] = omega1
            out["delta_rotor"] = float(x[ix["delta_rotor"]])
        if port is not None:
            eps, eps_dot = torsion(port, self.drivetrain.gearbox)
            gear = self.drivetrain.gearbox
            out["omega_gen"] = float(x[ix["omega_gen"]])
            out["delta_gen"] = float(x[ix["delta_gen"]])
            out["torsion"] = eps
            out["m_shaft"] = gear.c_nm_per_rad * eps + gear.d_nms_per_rad * eps_dot
        if self.turbine is not None:
            angles = FrameAngles(self.turbine.elevation_rad, float(x[ix["delta_rotor"]]))
            wind_r, _ = disc_to_rotor(park_wind(v), Vec3(0.0, 0.0, 0.0), angles)
            tsr = tip_speed_ratio(max(omega1, 0.0), v, self.turbine.rotor) if v > 0 else 0.0
            out["wind_eff"] = v
            out["wind_rotor_x"] = wind_r.x
            out["wind_rotor_y"] = wind_r.y
            out["wind_rotor_z"] = wind_r.z
            out["rotor_azimuth"] = angles.a_z
            out["tsr"] = tsr
            out["cp"] = power_coefficient(tsr, self.turbine.rotor) if v > 0 else 0.0
            out["m_aero"] = m_aero
        return out

    def derivative(self, t: float, x: np.ndarray) -> np.ndarray:
        return self.evaluate(t, x)[0]

    def observe(self, t: float, x: np.ndarray) -> Dict[str, float]:
        return self.evaluate(t, x, observe=True)[1]

    # --- columns ------------------------------------------------------------

    def available_columns(self) -> Tuple[str, ...]:
        columns: List[str] = []
        if self.turbine is not None:
            columns.extend(WIND_COLUMNS)
        if self.drivetrain is not None:
            columns.extend(DRIVETRAIN_COLUMNS)
        if self.two_mass:
            columns.extend(GEARBOX_COLUMNS)
        if self.machine is not None:
            columns.extend(MACHINE_COLUMNS)
        if self.grid is not None:
            columns.extend(GRID_COLUMNS)
        return tuple(columns)

    # --- energy -------------------------------------------------------------

    def stored_energy(self, x: np.ndarray) -> StoredEnergy:
        ix = self._ix
        kinetic = spring = magnetic = grid = 0.0
        if self.drivetrain is not None:
            states = [InertiaState(float(x[ix["delta_rotor"]]), float(x[ix["omega_rotor"]]))]
            inertias = [self.drivetrain.rotor]
            if self.two_mass:
                states.append(InertiaState(float(x[ix["delta_gen"]]), float(x[ix["omega_gen"]])))
                inertias.append(self.drivetrain.generator)
                port = ShaftPortState.from_inertias(states[0], states[1])
                spring = shaft_energy(port, self.drivetrain.gearbox)
            kinetic = kinetic_energy(tuple(states), tuple(inertias))
        if self.machine is not None and not self.rms:
            mblock = x[self.layout.block("machine").slice]
            magnetic = magnetic_energy(MachineState(mblock[0:2], mblock[2:4]), self.machine.params)
        if self.grid is not None and not self.rms:
            gblock = x[self.layout.block("grid").slice]
            grid = self.segment.stored_energy(LineSegmentState(gblock[:3], gblock[3:]))
        return StoredEnergy(kinetic, spring, magnetic, grid)

    # --- initial state ------------------------------------------------------

    def initial_state(self) -> np.ndarray:
        """Steady state at ``machine.initial_slip``, or rest with the configured speed."""
        ix = self._ix
        x = self.layout.zeros()
        if self.drivetrain is not None:
            x[ix["omega_rotor"]] = self.drivetrain.initial_omega
            if self.two_mass:
                x[ix["omega_gen"]] = self.drivetrain.initial_omega * self.drivetrain.gearbox.n

        if self.grid is None:
            return x

        source = self.grid.source
        omega_s = source.omega(0.0)
        f0 = omega_s / (2.0 * math.pi)
        sending = balanced_set(source.phasor(0.0))
        y_machine = 0j
        if self.machine is not None:
            y_machine = 1.0 / input_impedance(self.machine.initial_slip, f0, self.machine.params)
        solution = rms_phasor_solve(
            sending,
            self.load_admittance,
            self.grid.segment,
            f0,
            balanced_admittance=y_machine,
            segment=self.segment,
        )
        if not self.rms:
            block = self.layout.block("grid").slice
            x[block] = np.concatenate([-np.real(solution.line_current), np.real(solution.receiving)])

        if self.machine is None:
            return x

        params = self.machine.params
        slip = self.machine.initial_slip
        point = steady_state_point(slip, complex(solution.receiving_seq[1]), f0, params)
        psi_s, psi_r = point.fluxes(params)
        mblock = self.layout.block("machine").slice
        if self.rms:
            x[mblock] = (psi_r.real, psi_r.imag)
        else:
            x[mblock] = (psi_s.real, psi_s.imag, psi_r.real, psi_r.imag)

        omega_m = (1.0 - slip) * omega_s / params.pole_pairs
        if self.two_mass:
            dtr = self.drivetrain
            gear = dtr.gearbox
            x[ix["omega_gen"]] = omega_m
            x[ix["omega_rotor"]] = omega_m / gear.n
            m2 = dtr.generator.kf_nms * omega_m - dtr.applied_generator_nm - point.torque
            eps = gear.n * m2 / gear.c_nm_per_rad if gear.c_nm_per_rad > 0 else 0.0
            x[ix["delta_rotor"]] = 0.0
            x[ix["delta_gen"]] = -gear.n * eps
        else:
            x[ix["omega_rotor"]] = omega_m
        logger.info("Initial state at slip %.4g: torque %.4g Nm, omega %.4g rad/s", slip, point.torque, omega_m)
        return x


def system_derivative(
    t: float,
    state: Union[SimState, np.ndarray],
    scenario: Scenario,
    env: Optional[WindSeries] = None,
) -> np.ndarray:
    """One-off dx/dt of ``scenario`` at (t, state); loops should reuse a :class:`System`."""
    values = state.values if isinstance(state, SimState) else np.asarray(state, dtype=float)
    return System(scenario, env).derivative(t, values)


__all__ = ["System", "StoredEnergy", "GRID_STATES", "system_derivative"]
