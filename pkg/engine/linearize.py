"""Finite-difference linearisation of the coupled system."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from windfield.core import WindSeries

from .run import build_system, march
from .scenario import Scenario
from .system import System

logger = logging.getLogger(__name__)


def jacobian(system: System, t: float, x: np.ndarray, eps: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian over the physical states (audit block excluded)."""
    idx = system.layout.physical_indices()
    jac = np.zeros((len(idx), len(idx)))
    for col, i in enumerate(idx):
        h = eps * max(1.0, abs(float(x[i])))
        plus = x.copy()
        minus = x.copy()
        plus[i] += h
        minus[i] -= h
        jac[:, col] = (system.derivative(t, plus)[idx] - system.derivative(t, minus)[idx]) / (2.0 * h)
    return jac


@dataclass(frozen=True)
class Linearization:
    time: float
    state_names: Tuple[str, ...]
    matrix: np.ndarray
    eigenvalues: np.ndarray


def linearize(
    scenario: Scenario,
    at_time: float = 0.0,
    env: Optional[WindSeries] = None,
    eps: float = 1e-6,
) -> Linearization:
    """Jacobian and eigenvalues at the initial state, or after marching to ``at_time``."""
    if at_time < 0 or at_time > scenario.duration_s:
        raise ValueError(f"at_time must lie in [0, {scenario.duration_s}], got {at_time}")
    system = build_system(scenario, env)
    x = system.initial_state()
    n_steps = int(np.floor(at_time / scenario.dt_s + 1e-9))
    if n_steps:
        x = march(system, x, 0.0, n_steps, scenario.dt_s, scenario.method)
    t = n_steps * scenario.dt_s
    matrix = jacobian(system, t, x, eps)
    eigenvalues = np.linalg.eigvals(matrix) if matrix.size else np.zeros(0, dtype=complex)
    names = tuple(system.layout.names[i] for i in system.layout.physical_indices())
    logger.info("Linearised %d states at t=%.4g s", len(names), t)
    return Linearization(t, names, matrix, eigenvalues[np.argsort(eigenvalues.real)])


__all__ = ["jacobian", "linearize", "Linearization"]
