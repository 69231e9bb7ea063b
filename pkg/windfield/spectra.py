"""Target one-sided PSD, pairwise coherence and transfer-function angle."""
from __future__ import annotations

import logging
from typing import Union

import numpy as np
from scipy.integrate import trapezoid

from .core import (
    DavenportCoherence,
    GridPoint,
    KaimalPsd,
    TabulatedAngle,
    WindFieldSpec,
    point_statistics,
)

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def _as_frequency(f: ArrayLike) -> np.ndarray:
    freq = np.asarray(f, dtype=float)
    if np.any(freq < 0):
        raise ValueError("Frequency must be >= 0")
    return freq


def _restore(values: np.ndarray, f: ArrayLike) -> ArrayLike:
    return float(values) if np.ndim(f) == 0 else values


def _clamped_integral(knots: np.ndarray, values: np.ndarray, upper: float) -> float:
    """Exact integral over [0, upper] of the clamped piecewise-linear table."""
    inner = knots[(knots > 0) & (knots < upper)]
    grid = np.concatenate([[0.0], inner, [upper]])
    return float(trapezoid(np.interp(grid, knots, values), grid))


def kaimal_shape(f: np.ndarray, mu: float, length_scale_m: float) -> np.ndarray:
    """Unit-variance Kaimal form 4(L/mu) / (1 + 6 f L / mu)^(5/3)."""
    tau = length_scale_m / mu
    return 4.0 * tau / (1.0 + 6.0 * f * tau) ** (5.0 / 3.0)


def target_psd(spec: WindFieldSpec, point: GridPoint, f: ArrayLike) -> ArrayLike:
    """One-sided PSD of the wind speed at ``point`` in m^2/s^2/Hz.

    The density is band-limited to [0, Nyquist] and normalised so that its
    integral over that band equals the point variance. Tabulated densities are
    clamped to their end values outside the knot range.
    """
    freq = _as_frequency(f)
    mu, sigma = point_statistics(spec, point)
    f_nyq = spec.nyquist_hz
    in_band = freq <= f_nyq * (1.0 + 1e-9)
    if sigma == 0.0 or mu <= 0.0:
        return _restore(np.zeros_like(freq), f)

    if isinstance(spec.psd, KaimalPsd):
        tau = spec.psd.length_scale_m / mu
        norm = 1.0 - (1.0 + 6.0 * f_nyq * tau) ** (-2.0 / 3.0)
        shape = kaimal_shape(freq, mu, spec.psd.length_scale_m) / norm
    else:
        knots = np.asarray(spec.psd.frequency_hz, dtype=float)
        density = np.asarray(spec.psd.density, dtype=float)
        norm = _clamped_integral(knots, density, f_nyq)
        if norm <= 0.0:
            raise ValueError("Tabulated PSD integrates to zero over [0, Nyquist]")
        shape = np.interp(freq, knots, density) / norm
    values = np.where(in_band, sigma * sigma * shape, 0.0)
    return _restore(values, f)


def _pair_mean_speed(spec: WindFieldSpec, i: GridPoint, j: GridPoint) -> float:
    mu_i, _ = point_statistics(spec, i)
    mu_j, _ = point_statistics(spec, j)
    return 0.5 * (mu_i + mu_j)


def target_coherence(spec: WindFieldSpec, i: GridPoint, j: GridPoint, f: ArrayLike) -> ArrayLike:
    """Coherence magnitude between two grid points, in [0, 1]."""
    freq = _as_frequency(f)
    distance = float(np.linalg.norm(i.position.as_array() - j.position.as_array())) if i.id != j.id else 0.0
    if distance == 0.0:
        return _restore(np.ones_like(freq), f)
    mu = _pair_mean_speed(spec, i, j)
    if mu <= 0.0:
        # a frozen mean flow keeps only the DC component correlated
        return _restore(np.where(freq == 0.0, 1.0, 0.0), f)
    reduced = freq * distance / mu
    if isinstance(spec.coherence, DavenportCoherence):
        values = np.exp(-spec.coherence.decay * reduced)
    else:
        values = np.interp(
            reduced,
            np.asarray(spec.coherence.reduced_frequency, dtype=float),
            np.asarray(spec.coherence.coherence, dtype=float),
        )
    return _restore(np.clip(values, 0.0, 1.0), f)


def target_angle(spec: WindFieldSpec, i: GridPoint, j: GridPoint, f: ArrayLike) -> ArrayLike:
    """Transfer-function angle between two points; antisymmetric in (i, j)."""
    freq = _as_frequency(f)
    if i.id == j.id or not isinstance(spec.angle_tf, TabulatedAngle):
        return _restore(np.zeros_like(freq), f)
    values = np.interp(
        freq,
        np.asarray(spec.angle_tf.frequency_hz, dtype=float),
        np.asarray(spec.angle_tf.angle_rad, dtype=float),
    )
    sign = 1.0 if i.id < j.id else -1.0
    return _restore(sign * values, f)


__all__ = ["kaimal_shape", "target_psd", "target_coherence", "target_angle"]
