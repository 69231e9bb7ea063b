"""Welch statistics of synthesised wind series and checks against their targets."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy import signal, stats

from .core import WindFieldSpec, WindSeries, point_statistics
from .spectra import target_coherence, target_psd

logger = logging.getLogger(__name__)

NPERSEG = 256
MIN_SEGMENTS = 8
# minimum record length, in segment lengths
MIN_AVERAGES = 128


@dataclass(frozen=True)
class StatisticsReport:
    point_ids: Tuple[int, ...]
    frequencies: np.ndarray
    means: np.ndarray
    stds: np.ndarray
    skewness: np.ndarray
    kurtosis: np.ndarray
    psd: np.ndarray
    coherence: np.ndarray
    phase: np.ndarray
    nperseg: int
    noverlap: int

    def pair(self, i: int, j: int) -> Tuple[np.ndarray, np.ndarray]:
        """Coherence magnitude and phase for series indices ``i`` and ``j``."""
        return self.coherence[i, j], self.phase[i, j]


def welch_nperseg(n_steps: int, fs: float, low_hz: float = 0.0) -> int:
    """Segment length resolving ``low_hz`` while keeping MIN_AVERAGES segments per record.

    Powers of two, never below NPERSEG.
    """
    needed = NPERSEG
    if low_hz > 0:
        needed = max(NPERSEG, 1 << math.ceil(math.log2(2.0 * fs / low_hz)))
    cap = NPERSEG
    while cap * 2 * MIN_AVERAGES <= n_steps:
        cap *= 2
    return min(needed, cap)


def _welch_kwargs(fs: float, nperseg: int, noverlap: int) -> dict:
    return {
        "fs": fs,
        "window": "hann",
        "nperseg": nperseg,
        "noverlap": noverlap,
        "detrend": "constant",
        "scaling": "density",
    }


def estimate_statistics(
    series: WindSeries,
    nperseg: Optional[int] = None,
    noverlap: Optional[int] = None,
) -> StatisticsReport:
    """Per-point moments and Welch PSD, per-pair coherence and phase.

    Hann window, ``nperseg`` samples per segment, 50 % overlap by default,
    constant detrending, one-sided densities. Without ``nperseg`` the
    segment length comes from ``welch_nperseg``.
    """
    if nperseg is None:
        nperseg = welch_nperseg(series.n_steps, 1.0 / series.dt)
    required = MIN_SEGMENTS * nperseg
    if series.n_steps < required:
        raise ValueError(
            f"Series too short for Welch estimation: needs at least {required} samples, got {series.n_steps}"
        )
    overlap = nperseg // 2 if noverlap is None else noverlap
    kwargs = _welch_kwargs(1.0 / series.dt, nperseg, overlap)
    x = series.samples
    n = series.n_points

    means = x.mean(axis=1)
    stds = x.std(axis=1)
    skewness = np.zeros(n)
    kurtosis = np.zeros(n)
    for k in range(n):
        if stds[k] > 0:
            skewness[k] = float(stats.skew(x[k]))
            kurtosis[k] = float(stats.kurtosis(x[k], fisher=True))

    freqs, psd = signal.welch(x, axis=-1, **kwargs)
    coherence = np.zeros((n, n, len(freqs)))
    phase = np.zeros((n, n, len(freqs)))
    for k in range(n):
        coherence[k, k] = 1.0
        for m in range(k + 1, n):
            _, pxy = signal.csd(x[k], x[m], **kwargs)
            denom = np.sqrt(psd[k] * psd[m])
            with np.errstate(divide="ignore", invalid="ignore"):
                coh = np.where(denom > 0, np.abs(pxy) / denom, 0.0)
            coherence[k, m] = coherence[m, k] = coh
            phase[k, m] = np.angle(pxy)
            phase[m, k] = -phase[k, m]

    return StatisticsReport(
        point_ids=tuple(series.point_ids),
        frequencies=freqs,
        means=means,
        stds=stds,
        skewness=skewness,
        kurtosis=kurtosis,
        psd=psd,
        coherence=coherence,
        phase=phase,
        nperseg=nperseg,
        noverlap=overlap,
    )


@dataclass(frozen=True)
class StationarityReport:
    z_mean: np.ndarray
    z_std: np.ndarray
    trend_t: np.ndarray
    trend_limit: float
    z_limit: float = 3.0

    @property
    def passed(self) -> bool:
        return bool(
            np.all(np.abs(self.z_mean) <= self.z_limit)
            and np.all(np.abs(self.z_std) <= self.z_limit)
            and np.all(np.abs(self.trend_t) <= self.trend_limit)
        )


def _half_difference_z(batch_values: np.ndarray) -> float:
    half = len(batch_values) // 2
    first, second = batch_values[:half], batch_values[half:2 * half]
    se = np.sqrt(first.var(ddof=1) / len(first) + second.var(ddof=1) / len(second))
    if se == 0:
        return 0.0
    return float((second.mean() - first.mean()) / se)


def check_stationarity(
    series: WindSeries,
    batches: int = 32,
    z_limit: float = 3.0,
    trend_alpha: float = 1e-3,
) -> StationarityReport:
    """Compare first and second halves with batch-means standard errors.

    Returns z-scores of the mean and std differences per point plus the
    t-statistic of a linear trend fitted to the batch means, tested
    two-sided at ``trend_alpha``.
    """
    if batches < 4 or batches % 2:
        raise ValueError(f"batches must be an even number >= 4, got {batches}")
    batch_len = series.n_steps // batches
    if batch_len < 2:
        raise ValueError(f"Series of {series.n_steps} samples is too short for {batches} batches")
    z_mean, z_std, trend_t = [], [], []
    index = np.arange(batches, dtype=float)
    for row in series.samples:
        chunks = row[: batch_len * batches].reshape(batches, batch_len)
        batch_means = chunks.mean(axis=1)
        batch_stds = chunks.std(axis=1, ddof=1)
        z_mean.append(_half_difference_z(batch_means))
        z_std.append(_half_difference_z(batch_stds))
        if np.ptp(batch_means) == 0:
            trend_t.append(0.0)
            continue
        fit = stats.linregress(index, batch_means)
        trend_t.append(float(fit.slope / fit.stderr) if fit.stderr > 0 else 0.0)
    limit = float(stats.t.ppf(1.0 - 0.5 * trend_alpha, batches - 2))
    return StationarityReport(np.array(z_mean), np.array(z_std), np.array(trend_t), limit, z_limit)


@dataclass(frozen=True)
class Tolerances:
    mean_rel: float = 0.02
    std_rel: float = 0.05
    skewness: float = 0.1
    kurtosis: float = 0.2
    psd_db: float = 1.5
    coherence_rms: float = 0.1
    band_hz: Tuple[float, float] = (0.01, 5.0)


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    limit: float
    passed: bool


@dataclass
class VerificationResult:
    report: StatisticsReport
    checks: List[Check] = field(default_factory=list)
    band_hz: Tuple[float, float] = (0.0, 0.0)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failed(self) -> List[Check]:
        return [check for check in self.checks if not check.passed]


def _band_limits(fs: float, nperseg: int, tolerances: Tolerances) -> Tuple[float, float]:
    # the first Welch bins carry the window leakage of the removed segment mean
    low = max(tolerances.band_hz[0], 2.0 * fs / nperseg)
    high = min(tolerances.band_hz[1], 0.45 * fs)
    return low, high


def _relative(estimate: float, target: float) -> float:
    if target == 0:
        return abs(estimate)
    return abs(estimate - target) / abs(target)


def verify(
    series: WindSeries,
    spec: WindFieldSpec,
    tolerances: Tolerances = Tolerances(),
    nperseg: Optional[int] = None,
) -> VerificationResult:
    """Evaluate the series against the spec's point statistics, PSD and coherence.

    The moment tolerances assume a record of many integral time scales
    (duration well above L / mean speed); the PSD and coherence checks
    cover ``result.band_hz``, whose low edge is at least 2 fs / nperseg.
    """
    fs = 1.0 / series.dt
    if nperseg is None:
        nperseg = welch_nperseg(series.n_steps, fs, tolerances.band_hz[0])
    if series.n_points != len(spec.points):
        raise ValueError(f"Series has {series.n_points} points, spec has {len(spec.points)}")
    report = estimate_statistics(series, nperseg=nperseg)
    low, high = _band_limits(fs, nperseg, tolerances)
    if low > tolerances.band_hz[0]:
        logger.warning(
            "Spectral checks start at %.4g Hz instead of %.4g Hz: %d-sample segments of a %d-sample record",
            low, tolerances.band_hz[0], nperseg, series.n_steps,
        )
    result = VerificationResult(report, band_hz=(low, high))
    band = (report.frequencies >= low) & (report.frequencies <= high)
    freqs = report.frequencies[band]

    for k, point in enumerate(spec.points):
        mu, sigma = point_statistics(spec, point)
        tag = f"p{point.id}"
        err = _relative(report.means[k], mu)
        result.checks.append(Check(f"{tag}.mean_rel", err, tolerances.mean_rel, err <= tolerances.mean_rel))
        err = _relative(report.stds[k], sigma)
        result.checks.append(Check(f"{tag}.std_rel", err, tolerances.std_rel, err <= tolerances.std_rel))
        if sigma == 0:
            continue
        skew = abs(report.skewness[k])
        result.checks.append(Check(f"{tag}.skewness", skew, tolerances.skewness, skew <= tolerances.skewness))
        kurt = abs(report.kurtosis[k])
        result.checks.append(Check(f"{tag}.kurtosis", kurt, tolerances.kurtosis, kurt <= tolerances.kurtosis))
        target = np.asarray(target_psd(spec, point, freqs), dtype=float)
        estimate = report.psd[k][band]
        usable = (target > 0) & (estimate > 0)
        if np.any(usable):
            worst = float(np.max(np.abs(10.0 * np.log10(estimate[usable] / target[usable]))))
            result.checks.append(Check(f"{tag}.psd_db", worst, tolerances.psd_db, worst <= tolerances.psd_db))

    for k in range(len(spec.points)):
        for m in range(k + 1, len(spec.points)):
            pi, pj = spec.points[k], spec.points[m]
            if point_statistics(spec, pi)[1] == 0 or point_statistics(spec, pj)[1] == 0:
                continue
            target = np.asarray(target_coherence(spec, pi, pj, freqs), dtype=float)
            rms = float(np.sqrt(np.mean((report.coherence[k, m][band] - target) ** 2))) if freqs.size else 0.0
            result.checks.append(
                Check(f"p{pi.id}-p{pj.id}.coherence_rms", rms, tolerances.coherence_rms, rms <= tolerances.coherence_rms)
            )

    logger.info("Verified %d checks, %d failed", len(result.checks), len(result.failed()))
    return result


__all__ = [
    "NPERSEG",
    "MIN_AVERAGES",
    "welch_nperseg",
    "StatisticsReport",
    "StationarityReport",
    "Tolerances",
    "Check",
    "VerificationResult",
    "estimate_statistics",
    "check_stationarity",
    "verify",
]
