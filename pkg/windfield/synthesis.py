"""Spectral synthesis of spatially correlated wind-speed series.

Per rfft bin the cross-spectral matrix is factored (Cholesky, eigen fallback)
and driven with independent complex Gaussian phasors drawn from the seeded
generator; an inverse FFT returns the time series. The result is periodic in
the record length and therefore stationary from the first sample.
"""
from __future__ import annotations

import dataclasses
import logging
from typing import List, Tuple

import numpy as np

from .core import MIN_STEPS, TabulatedAngle, WindFieldSpec, WindSeries, point_statistics
from .spectra import target_angle, target_coherence, target_psd

logger = logging.getLogger(__name__)

JITTER = 1e-12
CHUNK_BINS = 2048


def synthesis_frequencies(spec: WindFieldSpec) -> np.ndarray:
    return np.fft.rfftfreq(spec.n_steps, d=spec.dt)


def synthesis_amplitudes(spec: WindFieldSpec) -> np.ndarray:
    """Variance carried by each rfft bin, per point (``n_points x n_bins``).

    The DC bin carries only the mean. The remaining bins follow the target
    PSD and are rescaled so that each row sums to the point variance.
    """
    freqs = synthesis_frequencies(spec)
    df = spec.sample_rate_hz / spec.n_steps
    rows: List[np.ndarray] = []
    for point in spec.points:
        _, sigma = point_statistics(spec, point)
        density = np.asarray(target_psd(spec, point, freqs), dtype=float)
        density[0] = 0.0
        variance = density * df
        total = float(variance.sum())
        if sigma == 0.0:
            rows.append(np.zeros_like(variance))
            continue
        if total <= 0.0:
            raise ValueError(f"Target PSD of point {point.id} has no power in the synthesised band")
        rows.append(variance * (sigma * sigma / total))
    return np.vstack(rows)


def coherence_matrices(spec: WindFieldSpec, freqs: np.ndarray) -> np.ndarray:
    """Hermitian coherence matrices C(f) with C_ij = COH_ij * exp(-j theta_ij)."""
    n = len(spec.points)
    matrices = np.zeros((len(freqs), n, n), dtype=complex)
    for k in range(n):
        matrices[:, k, k] = 1.0
        for m in range(k + 1, n):
            pi, pj = spec.points[k], spec.points[m]
            coh = np.asarray(target_coherence(spec, pi, pj, freqs), dtype=float)
            theta = np.asarray(target_angle(spec, pi, pj, freqs), dtype=float)
            value = coh * np.exp(-1j * theta)
            matrices[:, k, m] = value
            matrices[:, m, k] = np.conj(value)
    return matrices


def factor_matrices(matrices: np.ndarray) -> Tuple[np.ndarray, bool]:
    """Lower factors L with L L^H = C + jitter; returns (factors, used_fallback)."""
    n = matrices.shape[-1]
    jittered = matrices + JITTER * np.eye(n)
    try:
        return np.linalg.cholesky(jittered), False
    except np.linalg.LinAlgError:
        eigvals, eigvecs = np.linalg.eigh(jittered)
        eigvals = np.clip(eigvals, 0.0, None)
        return eigvecs * np.sqrt(eigvals)[..., None, :], True


def coincident_sources(spec: WindFieldSpec) -> List[int]:
    """Index of the first point sharing each point's position, or its own index.

    A tabulated transfer-function angle keeps every point distinct.
    """
    sources = list(range(len(spec.points)))
    if isinstance(spec.angle_tf, TabulatedAngle):
        return sources
    for m, point in enumerate(spec.points):
        for k in range(m):
            if sources[k] == k and spec.points[k].position == point.position:
                sources[m] = k
                break
    return sources


def generate(spec: WindFieldSpec) -> WindSeries:
    """Synthesize the multi-point wind series described by ``spec``."""
    n_steps = spec.n_steps
    if n_steps < MIN_STEPS:
        raise ValueError(f"Wind series needs at least {MIN_STEPS} steps, got {n_steps}")

    sources = coincident_sources(spec)
    distinct = sorted(set(sources))
    if len(distinct) < len(spec.points):
        # coincident points share one synthesized row
        base = generate(dataclasses.replace(spec, points=tuple(spec.points[k] for k in distinct)))
        rows = [distinct.index(source) for source in sources]
        logger.info("Reused %d coincident point series", len(spec.points) - len(distinct))
        return WindSeries(spec.dt, base.samples[rows], tuple(p.id for p in spec.points))

    n_points = len(spec.points)
    freqs = synthesis_frequencies(spec)
    n_bins = len(freqs)
    has_nyquist = n_steps % 2 == 0
    stats = [point_statistics(spec, p) for p in spec.points]
    means = np.array([mu for mu, _ in stats])
    sigmas = np.array([sigma for _, sigma in stats])

    rng = np.random.default_rng(spec.seed)
    real_part = rng.standard_normal((n_bins, n_points))
    imag_part = rng.standard_normal((n_bins, n_points))

    amplitude = np.sqrt(synthesis_amplitudes(spec))
    spectrum = np.zeros((n_points, n_bins), dtype=complex)
    spectrum[:, 0] = n_steps * means

    last_interior = n_bins - 1 if has_nyquist else n_bins
    fallbacks = 0
    for start in range(1, last_interior, CHUNK_BINS):
        stop = min(start + CHUNK_BINS, last_interior)
        factors, fallback = factor_matrices(coherence_matrices(spec, freqs[start:stop]))
        fallbacks += int(fallback)
        phasors = (real_part[start:stop] + 1j * imag_part[start:stop])[..., None]
        mixed = (factors @ phasors)[..., 0].T
        spectrum[:, start:stop] = 0.5 * n_steps * amplitude[:, start:stop] * mixed

    if has_nyquist:
        nyq = n_bins - 1
        matrices = coherence_matrices(spec, freqs[nyq:]).real
        factors, fallback = factor_matrices(matrices)
        fallbacks += int(fallback)
        mixed = factors[0].real @ real_part[nyq]
        spectrum[:, nyq] = n_steps * amplitude[:, nyq] * mixed

    if fallbacks:
        logger.warning("Cholesky failed in %d frequency chunk(s); used clipped eigen-decomposition", fallbacks)

    samples = np.fft.irfft(spectrum, n=n_steps, axis=1)
    samples[sigmas == 0.0] = means[sigmas == 0.0, None]
    logger.info("Synthesised wind field: %d points x %d steps (seed %d)", n_points, n_steps, spec.seed)
    return WindSeries(spec.dt, samples, tuple(p.id for p in spec.points))


__all__ = [
    "coincident_sources",
    "synthesis_frequencies",
    "synthesis_amplitudes",
    "coherence_matrices",
    "factor_matrices",
    "generate",
]
