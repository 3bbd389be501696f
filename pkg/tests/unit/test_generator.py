"""Unit tests for scenario generation and measurement synthesis."""

import math

import numpy as np
import pytest

from packages.graphcore.graph import is_connected
from packages.scenario.generator import (
    anchor_grid,
    generate_scenario,
    synthesize_measurements,
)
from packages.scenario.models import measurement_graph
from packages.scenario.validation import ScenarioGenerationError, ValidationError


def test_anchor_grid_four_in_unit_square():
    """Test that four anchors sit at the centers of a 2 x 2 grid."""
    np.testing.assert_allclose(
        anchor_grid(4, (1.0, 1.0)),
        [[0.25, 0.25], [0.25, 0.75], [0.75, 0.25], [0.75, 0.75]],
    )


def test_anchor_grid_takes_first_cells():
    """Test that five anchors use a 3 x 3 grid and keep the first five cells."""
    grid = anchor_grid(5, (0.9, 0.9))

    assert grid.shape == (5, 2)
    np.testing.assert_allclose(grid[0], [0.15, 0.15])
    np.testing.assert_allclose(grid[4], [0.45, 0.45])


def test_generation_is_reproducible():
    first = generate_scenario(12, 4, (0.8, 0.8), 0.35, seed=7)
    second = generate_scenario(12, 4, (0.8, 0.8), 0.35, seed=7)

    assert first == second


def test_neighbouring_seeds_draw_different_networks():
    """Test that seeds differing by one never settle on the same draw."""
    first = generate_scenario(50, 9, (0.8, 0.8), 0.2, seed=11)
    second = generate_scenario(50, 9, (0.8, 0.8), 0.2, seed=12)

    assert (first.seed, second.seed) == (11, 12)
    assert first.true_sensor_positions != second.true_sensor_positions


def test_generated_scenario_is_connected():
    """Test that the accepted draw has a connected graph and an anchored sensor."""
    scn = synthesize_measurements(generate_scenario(15, 4, (1.0, 1.0), 0.4, seed=11), 0.0, 0.0)
    graph, anchors = measurement_graph(scn)

    assert is_connected(graph)
    assert any(anchors)


def test_area_sets_dimension():
    scn = generate_scenario(8, 8, (1.0, 1.0, 1.0), 0.8, seed=0)

    assert scn.dim == 3
    assert scn.truth_array().shape == (8, 3)
    assert np.all(scn.truth_array() <= 1.0)


def test_invalid_parameters_collected():
    """Test that every invalid generation parameter is reported at once."""
    with pytest.raises(ValidationError) as exc_info:
        generate_scenario(0, 0, (1.0,), -1.0, seed=0)

    assert set(exc_info.value.errors) == {"sensors", "anchors", "area", "rc"}


def test_generation_gives_up_after_retries():
    """Test that a range too small to connect anything raises ScenarioGenerationError."""
    with pytest.raises(ScenarioGenerationError, match="could not generate connected scenario"):
        generate_scenario(5, 1, (1.0, 1.0), 1e-6, seed=0)


def test_zero_noise_measurements_are_exact(chain_scenario):
    """Test that sigma = 0 reproduces true distances with unit variance."""
    truth = chain_scenario.truth_array()
    anchors = chain_scenario.anchor_array()

    for m in chain_scenario.range_measurements:
        assert m.r == pytest.approx(np.linalg.norm(truth[m.i] - truth[m.j]), abs=1e-15)
        assert m.var == 1.0
    for m in chain_scenario.anchor_measurements:
        assert m.y == pytest.approx(np.linalg.norm(truth[m.i] - anchors[m.j]), abs=1e-15)
        assert m.var == 1.0


def test_chain_measurement_graph(chain_scenario):
    """Test that only consecutive chain sensors measure each other."""
    pairs = [(m.i, m.j) for m in chain_scenario.range_measurements]

    assert pairs == [(i, i + 1) for i in range(5)]


def test_noisy_measurements_store_variance(chain_scenario):
    noisy = synthesize_measurements(chain_scenario, 0.05, 0.1, seed=1)

    assert all(m.var == pytest.approx(0.0025) for m in noisy.range_measurements)
    assert all(m.var == pytest.approx(0.01) for m in noisy.anchor_measurements)
    assert all(m.r >= 0 for m in noisy.range_measurements)


def test_noise_seed_is_reproducible(chain_scenario):
    first = synthesize_measurements(chain_scenario, 0.1, 0.1, seed=5)
    second = synthesize_measurements(chain_scenario, 0.1, 0.1, seed=5)

    assert first == second


def test_negative_noise_rejected(chain_scenario):
    with pytest.raises(ValidationError) as exc_info:
        synthesize_measurements(chain_scenario, -0.1, math.nan)

    assert set(exc_info.value.errors) == {"sigma_r", "sigma_a"}
