"""Simulation, configuration, experiment tables and the command-line tool."""

from .config import Config, ConfigError, load_config, parse_config
from .experiments import (
    FdaSetup,
    StaircaseReport,
    SweepRow,
    epsilon_staircase,
    fda_table,
    staircase_report,
    sweep,
    write_csv,
)
from .simulate import SimResult, simulate

__all__ = [
    "Config",
    "ConfigError",
    "FdaSetup",
    "SimResult",
    "StaircaseReport",
    "SweepRow",
    "epsilon_staircase",
    "fda_table",
    "load_config",
    "parse_config",
    "simulate",
    "staircase_report",
    "sweep",
    "write_csv",
]
