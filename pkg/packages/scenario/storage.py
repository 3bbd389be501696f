"""JSON persistence for scenarios."""

import json
import logging
from pathlib import Path
from typing import Any, Union

from packages.scenario.models import AnchorMeasurement, NetworkScenario, RangeMeasurement
from packages.scenario.validation import ScenarioValidationError, validate_scenario_json

logger = logging.getLogger("treeloc.scenario.storage")


def scenario_to_json(scn: NetworkScenario) -> dict[str, Any]:
    obj: dict[str, Any] = {
        "dim": scn.dim,
        "rc": scn.r_c,
        "seed": scn.seed,
        "anchors": [list(a) for a in scn.anchor_positions],
    }
    if scn.true_sensor_positions is not None:
        obj["sensors_true"] = [list(p) for p in scn.true_sensor_positions]
    obj["range_measurements"] = [
        {"i": m.i, "j": m.j, "r": m.r, "var": m.var} for m in scn.range_measurements
    ]
    obj["anchor_measurements"] = [
        {"i": m.i, "j": m.j, "y": m.y, "var": m.var} for m in scn.anchor_measurements
    ]
    return obj


def scenario_from_json(obj: Any) -> NetworkScenario:
    """
    Build a scenario from its parsed JSON form.

    Raises:
        ScenarioValidationError: With field paths for every violation
    """
    validate_scenario_json(obj)
    truth = obj.get("sensors_true")
    return NetworkScenario(
        dim=obj["dim"],
        anchor_positions=tuple(tuple(float(c) for c in a) for a in obj["anchors"]),
        r_c=float(obj["rc"]),
        seed=obj["seed"],
        true_sensor_positions=(
            None if truth is None else tuple(tuple(float(c) for c in p) for p in truth)
        ),
        range_measurements=tuple(
            RangeMeasurement(m["i"], m["j"], float(m["r"]), float(m["var"]))
            for m in obj["range_measurements"]
        ),
        anchor_measurements=tuple(
            AnchorMeasurement(m["i"], m["j"], float(m["y"]), float(m["var"]))
            for m in obj["anchor_measurements"]
        ),
    )


def save_scenario(scn: NetworkScenario, path: Union[str, Path]) -> None:
    path = Path(path)
    path.write_text(json.dumps(scenario_to_json(scn), indent=2) + "\n")
    logger.debug(f"saved scenario to {path}")


def load_scenario(path: Union[str, Path]) -> NetworkScenario:
    """
    Load and validate a scenario file.

    Raises:
        ScenarioValidationError: If the file is not valid JSON or violates the schema
        OSError: If the file cannot be read
    """
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioValidationError({"$": f"invalid JSON: {e}"}) from e
    return scenario_from_json(obj)
