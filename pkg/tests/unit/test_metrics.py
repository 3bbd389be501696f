"""Unit tests for accuracy metrics."""

import math

import numpy as np
import pytest

from packages.scenario.metrics import ml_objective, rmse


def test_rmse_exact_estimate():
    truth = np.array([[0.0, 0.0], [1.0, 1.0]])

    assert rmse(truth, [truth.copy()]) == 0.0


def test_rmse_single_displacement():
    """Test one point off by (3, 4) among two: sqrt(25 / 2)."""
    truth = np.array([[0.0, 0.0], [1.0, 1.0]])
    estimate = np.array([[3.0, 4.0], [1.0, 1.0]])

    assert rmse(truth, [estimate]) == pytest.approx(math.sqrt(12.5))


def test_rmse_averages_over_runs():
    """Test that errors are pooled over Monte Carlo runs before the square root."""
    truth = np.zeros((1, 2))

    assert rmse(truth, [np.array([[1.0, 0.0]]), np.array([[0.0, 3.0]])]) == pytest.approx(
        math.sqrt(5.0)
    )


def test_rmse_requires_runs():
    with pytest.raises(ValueError):
        rmse(np.zeros((2, 2)), [])


def test_rmse_shape_mismatch():
    with pytest.raises(ValueError, match="does not match"):
        rmse(np.zeros((2, 2)), [np.zeros((3, 2))])


def test_ml_objective_zero_at_truth(chain_scenario):
    assert ml_objective(chain_scenario, chain_scenario.truth_array()) == pytest.approx(
        0.0, abs=1e-24
    )


def test_ml_objective_positive_away_from_truth(chain_scenario):
    shifted = chain_scenario.truth_array() + 0.01

    assert ml_objective(chain_scenario, shifted) > 0.0
