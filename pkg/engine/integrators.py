"""Fixed-step explicit integrators for ``dx/dt = f(t, x)``."""
from __future__ import annotations

from typing import Callable, Dict

import numpy as np

Derivative = Callable[[float, np.ndarray], np.ndarray]
Stepper = Callable[[Derivative, float, np.ndarray, float], np.ndarray]


def euler_step(fn: Derivative, t: float, x: np.ndarray, h: float) -> np.ndarray:
    return x + h * fn(t, x)


def heun_step(fn: Derivative, t: float, x: np.ndarray, h: float) -> np.ndarray:
    k1 = fn(t, x)
    k2 = fn(t + h, x + h * k1)
    return x + 0.5 * h * (k1 + k2)


def rk4_step(fn: Derivative, t: float, x: np.ndarray, h: float) -> np.ndarray:
    """Classical 4th-order Runge-Kutta step."""
    k1 = fn(t, x)
    k2 = fn(t + 0.5 * h, x + 0.5 * h * k1)
    k3 = fn(t + 0.5 * h, x + 0.5 * h * k2)
    k4 = fn(t + h, x + h * k3)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


INTEGRATORS: Dict[str, Stepper] = {
    "euler": euler_step,
    "heun": heun_step,
    "rk4": rk4_step,
}


def get_stepper(method: str) -> Stepper:
    try:
        return INTEGRATORS[method]
    except KeyError as exc:
        raise ValueError(f"Unknown integrator '{method}', expected one of {sorted(INTEGRATORS)}") from exc


__all__ = ["INTEGRATORS", "euler_step", "heun_step", "rk4_step", "get_stepper"]
