"""Shared test fixtures and configuration."""

import numpy as np
import pytest

from packages.cli.pipeline import prepare_problem
from packages.graphcore.graph import Graph
from packages.scenario.generator import generate_scenario, synthesize_measurements
from packages.scenario.models import NetworkScenario

# Six sensors zig-zagging along a line: only consecutive sensors are within range,
# so the measurement graph is a path and the clique tree is a path of five edges.
CHAIN_SENSORS = tuple((0.1 + 0.15 * i, 0.5 + 0.03 * (-1) ** i) for i in range(6))
CHAIN_ANCHORS = ((0.1, 0.35), (0.55, 0.65), (0.85, 0.35))

LINE_SENSORS = ((0.3, 0.5), (0.45, 0.5))
LINE_ANCHORS = ((0.2, 0.45), (0.55, 0.55))


def make_scenario(sensors, anchors, r_c=0.2, sigma=0.0, seed=0) -> NetworkScenario:
    """Scenario with the given truth and synthesized measurements."""
    base = NetworkScenario(
        dim=len(anchors[0]),
        anchor_positions=tuple(tuple(a) for a in anchors),
        r_c=r_c,
        seed=seed,
        true_sensor_positions=tuple(tuple(p) for p in sensors),
    )
    return synthesize_measurements(base, sigma, sigma)


def random_problem(n_sensors: int, seed: int, sigma: float = 0.01, n_anchors: int = 4):
    base = generate_scenario(n_sensors, n_anchors, (1.0, 1.0), 0.45, seed)
    return prepare_problem(synthesize_measurements(base, sigma, sigma))


@pytest.fixture
def chain_scenario():
    """Six-sensor chain, three anchors, zero noise."""
    return make_scenario(CHAIN_SENSORS, CHAIN_ANCHORS)


@pytest.fixture
def chain_problem(chain_scenario):
    return prepare_problem(chain_scenario)


@pytest.fixture
def line_scenario():
    """Two sensors on a line, each seeing one anchor, zero noise."""
    return make_scenario(LINE_SENSORS, LINE_ANCHORS)


@pytest.fixture
def line_problem(line_scenario):
    return prepare_problem(line_scenario)


@pytest.fixture
def ten_sensor_problem():
    """Ten random sensors, four grid anchors, sigma = 0.01."""
    return random_problem(10, seed=3)


@pytest.fixture
def cycle4():
    return Graph(4, frozenset({(0, 1), (1, 2), (2, 3), (0, 3)}))


@pytest.fixture
def path4():
    return Graph(4, frozenset({(0, 1), (1, 2), (2, 3)}))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
