"""Wind-field synthesis, target spectra, Welch verification and spec loading."""

from __future__ import annotations

import dataclasses
import logging
import math
from pathlib import Path

import numpy as np
import pytest
from scipy import stats
from scipy.integrate import quad, trapezoid

from core.config import ConfigError
from windfield import (
    PanowskyTurbulence,
    TabulatedAngle,
    TabulatedPsd,
    WindSeries,
    check_stationarity,
    estimate_statistics,
    gaussian_pdf,
    generate,
    load_wind_spec,
    point_statistics,
    read_wind_csv,
    target_angle,
    target_coherence,
    target_psd,
    verify,
    write_wind_csv,
)
from windfield.core import MIN_STEPS
from windfield.estimate import welch_nperseg
from windfield.io import wind_spec_from_tree
from windfield.synthesis import coherence_matrices, coincident_sources, synthesis_frequencies
from tests.conftest import get_test_logger
from tests.helpers import wind_spec, wind_tree

logger = get_test_logger(__name__)
logger.info("Starting tests for windfield module")


def test_point_statistics_follow_shear_and_intensity() -> None:
    """Mean follows the power law from the nacelle; sigma = intensity * mean."""
    logger.info("Running point statistics test")
    spec = wind_spec(points=((0.0, 0.0, 30.0), (0.0, 0.0, 60.0)))
    mu0, sigma0 = point_statistics(spec, spec.points[0])
    mu1, sigma1 = point_statistics(spec, spec.points[1])
    assert (mu0, sigma0) == pytest.approx((10.0, 1.2))
    assert mu1 == pytest.approx(10.0 * 2.0**0.2)
    assert sigma1 == pytest.approx(0.12 * mu1)


def test_panowsky_turbulence() -> None:
    """sigma = mean / ln(z / z0), undefined at or below the roughness length."""
    logger.info("Running Panowsky turbulence test")
    base = wind_spec()
    spec = dataclasses.replace(base, turbulence=PanowskyTurbulence(0.05))
    mu, sigma = point_statistics(spec, spec.points[0])
    assert sigma == pytest.approx(mu / math.log(30.0 / 0.05))
    rough = dataclasses.replace(base, turbulence=PanowskyTurbulence(50.0))
    with pytest.raises(ValueError, match="roughness"):
        point_statistics(rough, rough.points[0])


def test_gaussian_pdf_is_normalised() -> None:
    """The speed density integrates to one and rejects sigma <= 0."""
    logger.info("Running Gaussian PDF test")
    total, _ = quad(lambda v: gaussian_pdf(v, 10.0, 1.2), -np.inf, np.inf)
    assert total == pytest.approx(1.0, rel=1e-8)
    assert gaussian_pdf(10.0, 10.0, 1.2) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi * 1.44))
    with pytest.raises(ValueError):
        gaussian_pdf(10.0, 10.0, 0.0)


def test_kaimal_psd_carries_the_point_variance() -> None:
    """The band-limited target integrates to sigma^2 and is zero above Nyquist."""
    logger.info("Running Kaimal PSD normalisation test")
    spec = wind_spec()
    point = spec.points[0]
    _, sigma = point_statistics(spec, point)
    freqs = np.linspace(0.0, spec.nyquist_hz, 200_001)
    integral = trapezoid(target_psd(spec, point, freqs), freqs)
    assert integral == pytest.approx(sigma * sigma, rel=1e-6)
    assert target_psd(spec, point, spec.nyquist_hz + 0.5) == 0.0
    with pytest.raises(ValueError):
        target_psd(spec, point, -1.0)


def test_tabulated_psd_is_clamped_and_normalised() -> None:
    """A flat table clamps to its end values and spreads sigma^2 over the band."""
    logger.info("Running tabulated PSD test")
    spec = dataclasses.replace(wind_spec(), psd=TabulatedPsd((1.0, 2.0), (3.0, 3.0)))
    _, sigma = point_statistics(spec, spec.points[0])
    values = target_psd(spec, spec.points[0], np.array([0.0, 0.5, 7.0]))
    assert values == pytest.approx(np.full(3, sigma * sigma / spec.nyquist_hz))


def test_coherence_targets() -> None:
    """Davenport decay, symmetry, unit self-coherence and the frozen-flow limit."""
    logger.info("Running coherence target test")
    spec = wind_spec()
    p0, p1 = spec.points
    f = np.array([0.0, 0.5, 2.0])
    expected = np.exp(-7.5 * f * 5.0 / 10.0)
    assert target_coherence(spec, p0, p1, f) == pytest.approx(expected)
    assert target_coherence(spec, p1, p0, f) == pytest.approx(expected)
    assert target_coherence(spec, p0, p0, f) == pytest.approx(np.ones(3))

    calm = wind_spec(wind_mps=0.0)
    assert target_coherence(calm, calm.points[0], calm.points[1], f) == pytest.approx(np.array([1.0, 0.0, 0.0]))


def test_angle_is_antisymmetric_and_matrices_hermitian() -> None:
    """theta_ij = -theta_ji, so every coherence matrix is Hermitian."""
    logger.info("Running transfer-angle test")
    spec = wind_spec(
        points=((0.0, 0.0, 30.0), (5.0, 0.0, 30.0), (0.0, 0.0, 40.0)),
        angle_tf=TabulatedAngle((0.0, 10.0), (0.0, 1.0)),
    )
    p0, p1, _ = spec.points
    f = np.array([0.0, 1.0, 4.0])
    assert target_angle(spec, p0, p1, f) == pytest.approx(np.array([0.0, 0.1, 0.4]))
    assert target_angle(spec, p1, p0, f) == pytest.approx(-np.array([0.0, 0.1, 0.4]))
    matrices = coherence_matrices(spec, f)
    assert np.allclose(matrices, np.conj(np.swapaxes(matrices, 1, 2)))
    assert matrices[1, 0, 1] == pytest.approx(math.exp(-7.5 * 5.0 / 10.0) * np.exp(-0.1j))


def test_generate_is_deterministic_per_seed() -> None:
    """Equal seeds give identical series; another seed gives a different one."""
    logger.info("Running synthesis determinism test")
    first = generate(wind_spec(n_steps=1024, seed=3))
    again = generate(wind_spec(n_steps=1024, seed=3))
    other = generate(wind_spec(n_steps=1024, seed=4))
    assert np.array_equal(first.samples, again.samples)
    assert not np.array_equal(first.samples, other.samples)
    assert first.samples.shape == (2, 1024)
    assert first.point_ids == (0, 1)
    assert len(synthesis_frequencies(wind_spec(n_steps=1024))) == 513


def test_generate_rejects_short_records() -> None:
    """Fewer than the minimum number of steps cannot be synthesised."""
    logger.info("Running short-record test")
    with pytest.raises(ValueError, match=str(MIN_STEPS)):
        generate(wind_spec(n_steps=MIN_STEPS // 2))


def test_zero_turbulence_rows_equal_the_mean() -> None:
    """Without turbulence every sample is exactly the mean speed."""
    logger.info("Running zero-turbulence test")
    series = generate(wind_spec(intensity=0.0, n_steps=256))
    assert np.all(series.samples == 10.0)


def test_synthesised_field_passes_verification() -> None:
    """Moments, Welch PSD and pairwise coherence match their targets."""
    logger.info("Running end-to-end verification test")
    spec = wind_spec(points=((0.0, 0.0, 30.0), (5.0, 0.0, 30.0), (50.0, 0.0, 30.0)))
    result = verify(generate(spec), spec)
    for check in result.checks:
        logger.info("%s value=%.4f limit=%.4f passed=%s", check.name, check.value, check.limit, check.passed)
    assert result.passed, [check.name for check in result.failed()]
    assert {check.name for check in result.checks} >= {"p0.psd_db", "p0-p1.coherence_rms", "p1-p2.coherence_rms"}


def test_verification_rejects_mismatched_inputs() -> None:
    """Point-count mismatch and too-short series raise."""
    logger.info("Running verification input test")
    spec = wind_spec()
    series = generate(wind_spec(points=((0.0, 0.0, 30.0),), n_steps=4096))
    with pytest.raises(ValueError, match="points"):
        verify(series, spec)
    short = generate(wind_spec(n_steps=1024))
    with pytest.raises(ValueError, match="too short"):
        estimate_statistics(short)


def test_series_is_stationary_from_the_first_sample() -> None:
    """No seed of a single-point field fails the half-to-half or trend tests at a 1e-3 family-wise level."""
    logger.info("Running stationarity test over 20 seeds")
    seeds = range(20)
    per_test = 1e-3 / (3 * len(seeds))
    z_limit = float(stats.t.ppf(1.0 - 0.5 * per_test, 30))
    failing = []
    for seed in seeds:
        series = generate(wind_spec(points=((0.0, 0.0, 30.0),), n_steps=2**14, seed=seed))
        report = check_stationarity(series, z_limit=z_limit, trend_alpha=per_test)
        logger.info("Seed %d: z_mean=%s z_std=%s trend=%s", seed, report.z_mean, report.z_std, report.trend_t)
        if not report.passed:
            failing.append(seed)
    assert failing == []


def test_coincident_points_share_one_series() -> None:
    """Points at the same position get bit-identical series and unit coherence."""
    logger.info("Running coincident points test")
    spec = wind_spec(points=((0.0, 0.0, 30.0), (0.0, 0.0, 30.0), (5.0, 0.0, 30.0)), n_steps=2**13)
    assert coincident_sources(spec) == [0, 0, 2]
    series = generate(spec)
    assert series.point_ids == (0, 1, 2)
    assert np.array_equal(series.samples[0], series.samples[1])
    assert not np.array_equal(series.samples[0], series.samples[2])

    report = estimate_statistics(series)
    assert np.allclose(report.coherence[0, 1][1:], 1.0, atol=1e-9)
    target = target_coherence(spec, spec.points[0], spec.points[1], report.frequencies)
    assert np.allclose(target, 1.0)

    distinct = generate(wind_spec(points=((0.0, 0.0, 30.0), (5.0, 0.0, 30.0)), n_steps=2**13))
    assert np.array_equal(series.samples[[0, 2]], distinct.samples)

    angled = wind_spec(
        points=((0.0, 0.0, 30.0), (0.0, 0.0, 30.0)),
        n_steps=2**13,
        angle_tf=TabulatedAngle((0.0, 1.0), (0.0, 0.1)),
    )
    assert coincident_sources(angled) == [0, 1]


def test_segment_length_follows_the_record() -> None:
    """Segments grow to resolve the low band edge only while the record keeps enough averages."""
    logger.info("Running Welch segment length test")
    assert welch_nperseg(2**15, 20.0, 0.01) == 256
    assert welch_nperseg(2**18, 20.0, 0.01) == 1024
    assert welch_nperseg(2**22, 20.0, 0.01) == 4096
    assert welch_nperseg(2**18, 1.0, 0.01) == 256
    assert welch_nperseg(2**10, 20.0) == 256


def test_verification_reports_a_clamped_band(caplog: pytest.LogCaptureFixture) -> None:
    """A short 20 Hz record cannot resolve 0.01 Hz; the effective band is returned and logged."""
    logger.info("Running clamped band test")
    spec = wind_spec()
    with caplog.at_level(logging.WARNING, logger="windfield.estimate"):
        result = verify(generate(spec), spec)
    assert result.report.nperseg == 256
    assert result.band_hz == pytest.approx((2.0 * 20.0 / 256, 5.0))
    assert any("instead of 0.01 Hz" in record.getMessage() for record in caplog.records)


def test_long_record_passes_verification_at_a_realistic_length_scale() -> None:
    """With L = 340 m a record of several thousand integral time scales meets every tolerance from 0.01 Hz."""
    logger.info("Running realistic length scale verification test")
    spec = wind_spec(length_scale_m=340.0, n_steps=2**18, sample_rate_hz=1.0, seed=3)
    result = verify(generate(spec), spec)
    for check in result.checks:
        logger.info("%s value=%.4f limit=%.4f passed=%s", check.name, check.value, check.limit, check.passed)
    assert result.band_hz == pytest.approx((0.01, 0.45))
    assert result.passed, [check.name for check in result.failed()]


def test_stationarity_detects_a_ramp() -> None:
    """A warm-up ramp added to the series fails the trend test."""
    logger.info("Running ramp detection test")
    series = generate(wind_spec(n_steps=2**14, seed=11))
    ramp = np.linspace(-1.0, 1.0, series.n_steps)
    report = check_stationarity(WindSeries(series.dt, series.samples + ramp, series.point_ids))
    assert not report.passed
    assert np.all(np.abs(report.trend_t) > report.trend_limit)
    with pytest.raises(ValueError):
        check_stationarity(series, batches=5)


def test_wind_csv_preserves_series(tmp_path: Path) -> None:
    """The CSV keeps time step, point ids and samples to nine digits."""
    logger.info("Running wind CSV test")
    series = generate(wind_spec(n_steps=256))
    path = write_wind_csv(series, tmp_path / "wind.csv")
    loaded = read_wind_csv(path)
    assert loaded.dt == pytest.approx(series.dt)
    assert loaded.point_ids == series.point_ids
    assert np.allclose(loaded.samples, series.samples, rtol=1e-8)


def test_load_shipped_wind_spec(config_dir: Path) -> None:
    """The two-point example config loads into a Kaimal/Davenport spec."""
    logger.info("Running wind spec loading test")
    spec = load_wind_spec(config_dir / "wind_two_point.yaml")
    assert spec.seed == 7
    assert len(spec.points) == 2
    assert spec.psd.length_scale_m == pytest.approx(5.0)
    assert spec.n_steps == 2**15


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda tree: tree["turbulence"].update({"panowsky": {"z0_m": 0.05}}), "turbulence: exactly one"),
        (lambda tree: tree.pop("psd"), "psd: Field required"),
        (lambda tree: tree.update({"sample_rate_khz": tree.pop("sample_rate_hz")}), "sample_rate_khz: unit suffix mismatch"),
    ],
)
def test_wind_schema_errors(mutate, message: str) -> None:
    """Schema violations surface as ConfigError with the dotted key path."""
    logger.info("Running wind schema error test: %s", message)
    tree = wind_tree()
    mutate(tree)
    with pytest.raises(ConfigError) as excinfo:
        wind_spec_from_tree(tree)
    assert any(error.startswith(message) for error in excinfo.value.errors), excinfo.value.errors
