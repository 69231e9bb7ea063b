"""Correlated multi-point wind-speed synthesis and verification."""

from .core import (
    DavenportCoherence,
    DirectTurbulence,
    GridPoint,
    KaimalPsd,
    PanowskyTurbulence,
    TabulatedAngle,
    TabulatedCoherence,
    TabulatedPsd,
    WindFieldSpec,
    WindSeries,
    ZeroAngle,
    gaussian_pdf,
    mean_velocity_at_height,
    point_statistics,
    turbulence_sigma,
)
from .estimate import Tolerances, check_stationarity, estimate_statistics, verify, welch_nperseg
from .io import load_wind_spec, read_wind_csv, write_wind_csv
from .spectra import target_angle, target_coherence, target_psd
from .synthesis import generate

__all__ = [
    "DavenportCoherence",
    "DirectTurbulence",
    "GridPoint",
    "KaimalPsd",
    "PanowskyTurbulence",
    "TabulatedAngle",
    "TabulatedCoherence",
    "TabulatedPsd",
    "WindFieldSpec",
    "WindSeries",
    "ZeroAngle",
    "gaussian_pdf",
    "mean_velocity_at_height",
    "point_statistics",
    "turbulence_sigma",
    "target_psd",
    "target_coherence",
    "target_angle",
    "generate",
    "estimate_statistics",
    "welch_nperseg",
    "check_stationarity",
    "verify",
    "Tolerances",
    "load_wind_spec",
    "read_wind_csv",
    "write_wind_csv",
]
