"""Experiment configuration for the command-line tool."""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from packages.pdipm.options import SolverOptions, validate_solver_options
from packages.relaxation.assignment import RelaxationError
from packages.relaxation.regularization import RegularizationWeights, validate_regularization
from packages.scenario.validation import ValidationError

SOLVERS = ("centralized", "distributed")
DEFAULT_AREA_SIDE = 0.8


@dataclass
class ExperimentConfig:
    """
    Everything one invocation needs; every field comes from a command-line flag.

    Generation uses the scenario parameters; solving uses input_paths. A
    config carries one of the two, never both.
    """

    sensors: int = 50
    anchors: int = 9
    dim: int = 2
    area: Optional[tuple[float, ...]] = None
    rc: float = 0.2
    seed: int = 0
    noise: tuple[float, ...] = (0.01,)
    runs: int = 1
    solver: str = "distributed"
    root: Optional[int] = None
    solver_options: SolverOptions = field(default_factory=SolverOptions)
    regularization: RegularizationWeights = field(default_factory=RegularizationWeights)
    out_dir: Path = Path("out")
    trace: bool = False
    commlog: bool = False
    dump_subproblems: bool = False
    input_paths: tuple[Path, ...] = ()

    @property
    def area_sides(self) -> tuple[float, ...]:
        return self.area if self.area is not None else (DEFAULT_AREA_SIDE,) * self.dim


def parse_area(text: str) -> tuple[float, ...]:
    """
    Parse "WxH" or "WxHxD" into side lengths.

    Raises:
        ValidationError: If the text is not 2 or 3 positive numbers separated by "x"
    """
    try:
        sides = tuple(float(part) for part in text.lower().split("x"))
    except ValueError:
        message = f"cannot parse area {text!r}; expected WxH or WxHxD"
        raise ValidationError({"area": message}) from None
    if len(sides) not in (2, 3) or any(not (math.isfinite(s) and s > 0) for s in sides):
        raise ValidationError({"area": "area must have 2 or 3 positive side lengths"})
    return sides


def validate_experiment_config(config: ExperimentConfig, for_solve: bool = False) -> dict[str, str]:
    """
    Validate an experiment configuration.

    Args:
        config: Configuration to check
        for_solve: True when the config drives a solve (input paths required,
            generation parameters unused)

    Returns:
        Empty dict if valid

    Raises:
        ValidationError: If any field is invalid (contains errors dict)
    """
    errors = {}
    if for_solve:
        if not config.input_paths:
            errors["input_paths"] = "At least one scenario file is required"
        if config.solver not in SOLVERS:
            errors["solver"] = f"Solver must be one of: {', '.join(SOLVERS)}"
        if config.root is not None and (not isinstance(config.root, int) or config.root < 0):
            errors["root"] = "Root must be 'auto' or a non-negative clique index"
        try:
            validate_solver_options(config.solver_options)
        except ValidationError as e:
            errors.update(e.errors)
        try:
            validate_regularization(config.regularization)
        except RelaxationError as e:
            errors["regularization"] = str(e)
    else:
        if config.input_paths:
            errors["input_paths"] = "Generation takes scenario parameters, not input files"
        if config.dim not in (2, 3):
            errors["dim"] = "Dimension must be 2 or 3"
        elif config.area is not None and len(config.area) != config.dim:
            errors["area"] = f"Area must have {config.dim} side lengths"
        if not isinstance(config.runs, int) or config.runs < 1:
            errors["runs"] = "Number of runs must be a positive integer"
        if not config.noise:
            errors["noise"] = "At least one noise level is required"
        elif any(not (math.isfinite(s) and s >= 0) for s in config.noise):
            errors["noise"] = "Noise levels must be non-negative"
        if not isinstance(config.seed, int) or config.seed < 0:
            errors["seed"] = "Seed must be a non-negative integer"
    if errors:
        raise ValidationError(errors)
    return errors
