"""Three-phase line segment with concentrated parameters.

The segment owns one shunt node (the terminal node where the machine and
the load attach) and one series branch towards the far-end boundary voltage,
normally the grid source. Branch current is positive from the node towards
the far end.

Phasors are peak-valued complex amplitudes; phase b lags phase a by 120 deg.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

A = np.exp(2j * math.pi / 3.0)
SEQUENCE_NAMES = ("zero", "positive", "negative")
IMAG_TOLERANCE = 1e-14

ArrayLike3 = Union[float, complex, Sequence[float], Sequence[complex], np.ndarray]


def sequence_transform() -> Tuple[np.ndarray, np.ndarray]:
    """Return (T, T_inv) with sequence = T @ phase, index order zero/positive/negative."""
    fortescue = np.array(
        [
            [1.0, 1.0, 1.0],
            [1.0, A, A * A],
            [1.0, A * A, A],
        ],
        dtype=complex,
    )
    return fortescue / 3.0, fortescue.conj()


T_SEQ, T_SEQ_INV = sequence_transform()


def balanced_set(phasor_a: complex) -> np.ndarray:
    """Positive-sequence phase set (a, b, c) for the phase-a phasor."""
    return phasor_a * np.array([1.0, A * A, A])


def to_sequence(phase: np.ndarray) -> np.ndarray:
    return T_SEQ @ np.asarray(phase, dtype=complex)


def to_phase(sequence: np.ndarray) -> np.ndarray:
    return T_SEQ_INV @ np.asarray(sequence, dtype=complex)


@dataclass(frozen=True)
class LineSegmentParams:
    r0_ohm_per_m: float
    r1_ohm_per_m: float
    l0_h_per_m: float
    l1_h_per_m: float
    ce_f_per_m: float = 0.0
    cl_f_per_m: float = 0.0
    ge_s_per_m: float = 0.0
    gl_s_per_m: float = 0.0
    length_m: float = 1.0

    def __post_init__(self) -> None:
        if self.length_m <= 0:
            raise ValueError(f"Segment length must be positive, got {self.length_m}")
        if self.r1_ohm_per_m <= 0 or self.l1_h_per_m <= 0:
            raise ValueError(
                f"Positive-sequence R1' and L1' must be positive, got {self.r1_ohm_per_m}, {self.l1_h_per_m}"
            )
        if self.r0_ohm_per_m < 0 or self.l0_h_per_m <= 0:
            raise ValueError(
                f"Zero-sequence parameters must be R0' >= 0 and L0' > 0, got {self.r0_ohm_per_m}, {self.l0_h_per_m}"
            )
        for name in ("ce_f_per_m", "cl_f_per_m", "ge_s_per_m", "gl_s_per_m"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.r0_ohm_per_m < self.r1_ohm_per_m:
            logger.warning(
                "Zero-sequence resistance %.3g Ohm/m below positive-sequence %.3g Ohm/m",
                self.r0_ohm_per_m,
                self.r1_ohm_per_m,
            )

    @property
    def has_capacitance(self) -> bool:
        return self.ce_f_per_m > 0 or self.cl_f_per_m > 0


@dataclass(frozen=True)
class PhaseMatrices:
    L: np.ndarray
    R: np.ndarray
    C: np.ndarray
    G: np.ndarray


def _from_sequence(zero: float, positive: float, name: str) -> np.ndarray:
    similar = T_SEQ_INV @ np.diag([zero, positive, positive]).astype(complex) @ T_SEQ
    closed = np.full((3, 3), (zero - positive) / 3.0) + np.eye(3) * positive
    scale = max(abs(zero), abs(positive), 1e-300)
    residue = float(np.max(np.abs(similar.imag)))
    if residue > 10 * IMAG_TOLERANCE * scale or not np.allclose(similar.real, closed, rtol=0.0, atol=1e-12 * scale):
        raise ValueError(f"Phase matrix {name} has imaginary residue {residue:.3g}; sequence transform is wrong")
    return closed


def shunt_pattern(earth: float, line: float) -> np.ndarray:
    """Node matrix with diagonal earth + 2*line and off-diagonal -line."""
    return np.full((3, 3), -line) + np.eye(3) * (earth + 3.0 * line)


def phase_matrices(params: LineSegmentParams) -> PhaseMatrices:
    return PhaseMatrices(
        L=_from_sequence(params.l0_h_per_m, params.l1_h_per_m, "L"),
        R=_from_sequence(params.r0_ohm_per_m, params.r1_ohm_per_m, "R"),
        C=shunt_pattern(params.ce_f_per_m, params.cl_f_per_m),
        G=shunt_pattern(params.ge_s_per_m, params.gl_s_per_m),
    )


def _as_phase_vector(value: ArrayLike3, dtype: type = float) -> np.ndarray:
    array = np.asarray(value, dtype=dtype)
    if array.ndim == 0:
        return np.full(3, array, dtype=dtype)
    if array.shape != (3,):
        raise ValueError(f"Expected a scalar or three per-phase values, got shape {array.shape}")
    return array


@dataclass(frozen=True)
class ShuntParams:
    """Lumped per-phase shunt (to earth) at the segment node."""

    conductance_s: np.ndarray = field(default_factory=lambda: np.zeros(3))
    capacitance_f: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self) -> None:
        conductance = _as_phase_vector(self.conductance_s)
        capacitance = _as_phase_vector(self.capacitance_f)
        if np.any(conductance < 0) or np.any(capacitance < 0):
            raise ValueError("Shunt conductance and capacitance must be >= 0")
        object.__setattr__(self, "conductance_s", conductance)
        object.__setattr__(self, "capacitance_f", capacitance)

    def admittance(self, f_grid: float) -> np.ndarray:
        return self.conductance_s + 2j * math.pi * f_grid * self.capacitance_f


@dataclass(frozen=True)
class LineSegmentState:
    i_abc: np.ndarray
    u_abc: np.ndarray

    @classmethod
    def zero(cls) -> "LineSegmentState":
        return cls(np.zeros(3), np.zeros(3))

    @classmethod
    def from_vector(cls, values: np.ndarray) -> "LineSegmentState":
        return cls(np.asarray(values[0:3], dtype=float), np.asarray(values[3:6], dtype=float))

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.i_abc, self.u_abc])


class LineSegment:
    """Segment with its phase matrices and node matrices precomputed."""

    def __init__(self, params: LineSegmentParams, shunt: Optional[ShuntParams] = None) -> None:
        self.params = params
        self.shunt = shunt or ShuntParams()
        self.matrices = phase_matrices(params)
        dx = params.length_m
        self.node_capacitance = self.matrices.C * dx + np.diag(self.shunt.capacitance_f)
        self.node_conductance = self.matrices.G * dx + np.diag(self.shunt.conductance_s)
        self.l_inv = np.linalg.inv(self.matrices.L)
        self._c_inv: Optional[np.ndarray] = None

    @property
    def c_inv(self) -> np.ndarray:
        if self._c_inv is None:
            cond = np.linalg.cond(self.node_capacitance)
            if not np.isfinite(cond) or cond > 1e12:
                raise ValueError(
                    "Segment node has no usable capacitance; the node equation is algebraic (use RMS mode)"
                )
            self._c_inv = np.linalg.inv(self.node_capacitance)
        return self._c_inv

    def derivative(self, state: LineSegmentState, u_far: np.ndarray, i_source: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(di/dt, du/dt); ``i_source`` is the net current injected into the node."""
        dx = self.params.length_m
        di = self.l_inv @ ((state.u_abc - u_far) / dx - self.matrices.R @ state.i_abc)
        du = self.c_inv @ (i_source - self.node_conductance @ state.u_abc)
        return di, du

    def stored_energy(self, state: LineSegmentState) -> float:
        dx = self.params.length_m
        magnetic = 0.5 * dx * float(state.i_abc @ self.matrices.L @ state.i_abc)
        electric = 0.5 * float(state.u_abc @ self.node_capacitance @ state.u_abc)
        return magnetic + electric

    def losses(self, state: LineSegmentState) -> float:
        dx = self.params.length_m
        series = dx * float(state.i_abc @ self.matrices.R @ state.i_abc)
        shunt = float(state.u_abc @ self.node_conductance @ state.u_abc)
        return series + shunt

    def series_impedance_seq(self, f_grid: float) -> np.ndarray:
        omega = 2.0 * math.pi * f_grid
        p = self.params
        z0 = (p.r0_ohm_per_m + 1j * omega * p.l0_h_per_m) * p.length_m
        z1 = (p.r1_ohm_per_m + 1j * omega * p.l1_h_per_m) * p.length_m
        return np.array([z0, z1, z1])

    def shunt_admittance_seq(self, f_grid: float) -> np.ndarray:
        omega = 2.0 * math.pi * f_grid
        p = self.params
        y0 = (p.ge_s_per_m + 1j * omega * p.ce_f_per_m) * p.length_m
        y1 = (p.ge_s_per_m + 3.0 * p.gl_s_per_m + 1j * omega * (p.ce_f_per_m + 3.0 * p.cl_f_per_m)) * p.length_m
        return np.array([y0, y1, y1])


def segment_derivative(
    state: LineSegmentState,
    u_far: np.ndarray,
    i_source: np.ndarray,
    segment: LineSegment,
) -> Tuple[np.ndarray, np.ndarray]:
    return segment.derivative(state, u_far, i_source)


@dataclass(frozen=True)
class RmsSolution:
    receiving: np.ndarray
    line_current: np.ndarray
    receiving_seq: np.ndarray
    line_current_seq: np.ndarray

    def sending_power(self, sending: np.ndarray) -> float:
        return phasor_power(sending, self.line_current)


def phasor_power(voltage: np.ndarray, current: np.ndarray) -> float:
    """Active power of peak phasors summed over the phases."""
    return 0.5 * float(np.real(np.sum(np.asarray(voltage) * np.conj(np.asarray(current)))))


def rms_phasor_solve(
    sending: ArrayLike3,
    load: ArrayLike3,
    params: LineSegmentParams,
    f_grid: float,
    *,
    injection: Optional[ArrayLike3] = None,
    balanced_admittance: complex = 0j,
    segment: Optional[LineSegment] = None,
) -> RmsSolution:
    """Algebraic steady state of the segment fed by ``sending`` at the far end.

    ``load`` is the per-phase admittance to earth at the receiving node,
    ``injection`` extra per-phase currents into that node and
    ``balanced_admittance`` an ungrounded balanced admittance (a machine).
    ``line_current`` flows from the sending end into the receiving node.
    """
    if f_grid <= 0:
        raise ValueError(f"Grid frequency must be positive, got {f_grid}")
    segment = segment or LineSegment(params)
    v_seq = to_sequence(_as_phase_vector(sending, complex))
    y_load = _as_phase_vector(load, complex)
    j_seq = to_sequence(_as_phase_vector(0j if injection is None else injection, complex))
    z_seq = segment.series_impedance_seq(f_grid)
    y_node = segment.shunt_admittance_seq(f_grid) + np.array([0j, balanced_admittance, balanced_admittance])

    if np.allclose(y_load, y_load[0], rtol=0.0, atol=1e-15 * max(1.0, float(np.max(np.abs(y_load))))):
        y_node = y_node + y_load[0]
        denominator = 1.0 + z_seq * y_node
        for idx, value in enumerate(denominator):
            if abs(value) < 1e-12:
                raise ValueError(f"Singular network in the {SEQUENCE_NAMES[idx]} sequence")
        u_seq = (v_seq + z_seq * j_seq) / denominator
        i_seq = y_node * u_seq - j_seq
    else:
        y_matrix = np.diag(y_node) + T_SEQ @ np.diag(y_load) @ T_SEQ_INV
        system = np.eye(3) + np.diag(z_seq) @ y_matrix
        if np.linalg.cond(system) > 1e14:
            raise ValueError("Singular network in the coupled sequence system (unbalanced load)")
        u_seq = np.linalg.solve(system, v_seq + z_seq * j_seq)
        i_seq = y_matrix @ u_seq - j_seq
    return RmsSolution(
        receiving=to_phase(u_seq),
        line_current=to_phase(i_seq),
        receiving_seq=u_seq,
        line_current_seq=i_seq,
    )


def phase_voltages(peak: float, theta: float) -> np.ndarray:
    """Instantaneous balanced voltages of a source at electrical angle ``theta``."""
    return peak * np.cos(theta - np.array([0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0]))


def instantaneous(phasors: np.ndarray, theta: float) -> np.ndarray:
    return np.real(np.asarray(phasors) * np.exp(1j * theta))


__all__ = [
    "SEQUENCE_NAMES",
    "LineSegmentParams",
    "LineSegmentState",
    "LineSegment",
    "PhaseMatrices",
    "ShuntParams",
    "RmsSolution",
    "sequence_transform",
    "balanced_set",
    "to_sequence",
    "to_phase",
    "shunt_pattern",
    "phase_matrices",
    "segment_derivative",
    "rms_phasor_solve",
    "phasor_power",
    "phase_voltages",
    "instantaneous",
]
