"""Validation for scenario files and generation parameters."""

import math
from typing import Any, Optional

from packages.graphcore.graph import Graph, connected_components


class ValidationError(Exception):
    """Raised when validation fails; errors maps field paths to messages."""

    def __init__(self, errors: dict[str, str]):
        self.errors = errors
        super().__init__(f"Validation failed: {errors}")


class ScenarioValidationError(ValidationError):
    """Raised when a scenario file or object violates the schema or its invariants."""


class ScenarioGenerationError(Exception):
    """Raised when random generation cannot produce a connected scenario."""


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _is_index(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 0


def _check_points(
    errors: dict[str, str], obj: dict[str, Any], key: str, dim: Optional[int]
) -> Optional[int]:
    points = obj.get(key)
    if not isinstance(points, list):
        errors[key] = f"{key} must be a list of points"
        return None
    for n, point in enumerate(points):
        if not isinstance(point, list) or not all(_is_number(c) for c in point):
            errors[f"{key}[{n}]"] = "point must be a list of finite numbers"
        elif dim is not None and len(point) != dim:
            errors[f"{key}[{n}]"] = f"point must have {dim} coordinates"
    return len(points)


def _check_measurements(
    errors: dict[str, str],
    obj: dict[str, Any],
    key: str,
    value_key: str,
    n_anchors: Optional[int],
) -> list[dict[str, Any]]:
    items = obj.get(key)
    if not isinstance(items, list):
        errors[key] = f"{key} must be a list"
        return []
    seen: set[tuple[int, int]] = set()
    valid = []
    for n, item in enumerate(items):
        path = f"{key}[{n}]"
        if not isinstance(item, dict):
            errors[path] = "measurement must be an object"
            continue
        before = len(errors)
        for name in ("i", "j"):
            if not _is_index(item.get(name)):
                errors[f"{path}.{name}"] = f"{name} must be a non-negative integer"
        if not _is_number(item.get(value_key)) or item[value_key] < 0:
            errors[f"{path}.{value_key}"] = f"{value_key} must be a non-negative number"
        if not _is_number(item.get("var")) or item["var"] <= 0:
            errors[f"{path}.var"] = "variance must be positive"
        if len(errors) > before:
            continue
        pair = (item["i"], item["j"])
        if value_key == "r" and item["i"] >= item["j"]:
            errors[path] = "range measurement requires i < j"
        elif n_anchors is not None and value_key == "y" and item["j"] >= n_anchors:
            errors[f"{path}.j"] = f"anchor index out of range [0, {n_anchors})"
        elif pair in seen:
            errors[path] = f"duplicate measurement ({item['i']}, {item['j']})"
        else:
            seen.add(pair)
            valid.append(item)
    return valid


def validate_scenario_json(obj: Any) -> dict[str, str]:
    """
    Validate a parsed scenario document.

    Every violation is collected under its field path (for example
    "range_measurements[3].var") before raising.

    Returns:
        Empty dict if valid

    Raises:
        ScenarioValidationError: If any field is invalid, or the inter-sensor
            measurement graph is not connected (its components are listed)
    """
    if not isinstance(obj, dict):
        raise ScenarioValidationError({"$": "scenario must be a JSON object"})
    errors: dict[str, str] = {}

    dim = obj.get("dim")
    if dim not in (2, 3) or isinstance(dim, bool):
        errors["dim"] = "dim must be 2 or 3"
        dim = None
    if not _is_number(obj.get("rc")) or obj["rc"] <= 0:
        errors["rc"] = "rc must be a positive number"
    if not isinstance(obj.get("seed"), int) or isinstance(obj.get("seed"), bool):
        errors["seed"] = "seed must be an integer"

    n_anchors = _check_points(errors, obj, "anchors", dim)
    n_truth = None
    if "sensors_true" in obj and obj["sensors_true"] is not None:
        n_truth = _check_points(errors, obj, "sensors_true", dim)

    ranges = _check_measurements(errors, obj, "range_measurements", "r", n_anchors)
    anchored = _check_measurements(errors, obj, "anchor_measurements", "y", n_anchors)

    sensor_ids = [m["j"] for m in ranges] + [m["i"] for m in anchored]
    n_sensors = n_truth if n_truth is not None else max(sensor_ids, default=-1) + 1
    if n_truth is not None and sensor_ids and max(sensor_ids) >= n_truth:
        errors["sensors_true"] = "measurements reference sensors beyond sensors_true"
    if n_sensors <= 0:
        errors["range_measurements"] = errors.get(
            "range_measurements", "scenario must contain at least one sensor"
        )

    if not errors:
        graph = Graph(n_sensors, frozenset((m["i"], m["j"]) for m in ranges))
        components = connected_components(graph)
        if len(components) > 1:
            offending = components[1]
            errors["range_measurements"] = (
                f"measurement graph is not connected; component {offending} "
                f"is separated from {components[0]}"
            )

    if errors:
        raise ScenarioValidationError(errors)
    return errors
