"""Scenario generation, measurement synthesis, storage and accuracy metrics."""

from packages.scenario.generator import (
    STOCK_NOISE_LEVELS,
    anchor_grid,
    generate_scenario,
    synthesize_measurements,
)
from packages.scenario.metrics import ml_objective, rmse
from packages.scenario.models import (
    AnchorMeasurement,
    EstimateReport,
    NetworkScenario,
    RangeMeasurement,
    measurement_graph,
)
from packages.scenario.storage import (
    load_scenario,
    save_scenario,
    scenario_from_json,
    scenario_to_json,
)
from packages.scenario.validation import (
    ScenarioGenerationError,
    ScenarioValidationError,
    ValidationError,
    validate_scenario_json,
)

__all__ = [
    "STOCK_NOISE_LEVELS",
    "AnchorMeasurement",
    "EstimateReport",
    "NetworkScenario",
    "RangeMeasurement",
    "ScenarioGenerationError",
    "ScenarioValidationError",
    "ValidationError",
    "anchor_grid",
    "generate_scenario",
    "load_scenario",
    "measurement_graph",
    "ml_objective",
    "rmse",
    "save_scenario",
    "scenario_from_json",
    "scenario_to_json",
    "synthesize_measurements",
    "validate_scenario_json",
]
