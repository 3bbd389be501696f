"""Command-line experiments: generate scenarios, solve, aggregate reports."""

from packages.cli.config import ExperimentConfig, parse_area, validate_experiment_config
from packages.cli.main import ERROR_EXIT_CODES, cli, exit_code_for

__all__ = [
    "ERROR_EXIT_CODES",
    "ExperimentConfig",
    "cli",
    "exit_code_for",
    "parse_area",
    "validate_experiment_config",
]
