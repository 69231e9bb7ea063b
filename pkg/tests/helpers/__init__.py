"""Shared helper utilities for the WECS test-suite."""

from .data import (
    TEST_MACHINE,
    deep_update,
    drivetrain_tree,
    grid_tree,
    machine_tree,
    scenario_tree,
    wind_spec,
    wind_tree,
    write_yaml,
)
from .fs import ensure_directory, read_series
from .oracles import constant_slip_torque, dft_phasor, inertia_omega, richardson_order

__all__ = [
    "TEST_MACHINE",
    "deep_update",
    "drivetrain_tree",
    "grid_tree",
    "machine_tree",
    "scenario_tree",
    "wind_spec",
    "wind_tree",
    "write_yaml",
    "ensure_directory",
    "read_series",
    "constant_slip_torque",
    "dft_phasor",
    "inertia_omega",
    "richardson_order",
]
