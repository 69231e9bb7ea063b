"""Scenario-driven coupled simulation of the wind energy conversion chain."""

from .layout import SimState, StateLayout, known_columns
from .linearize import Linearization, jacobian, linearize
from .output import EnergyAudit, TimeSeriesOutput, summarize, write_output, write_summary
from .run import NumericalAbort, integrate, run_to_files, sweep
from .scenario import Scenario, ScenarioError, load_scenario, load_scenario_file
from .system import System, system_derivative

__all__ = [
    "EnergyAudit",
    "Linearization",
    "NumericalAbort",
    "Scenario",
    "ScenarioError",
    "SimState",
    "StateLayout",
    "System",
    "TimeSeriesOutput",
    "integrate",
    "jacobian",
    "known_columns",
    "linearize",
    "load_scenario",
    "load_scenario_file",
    "run_to_files",
    "summarize",
    "sweep",
    "system_derivative",
    "write_output",
    "write_summary",
]
