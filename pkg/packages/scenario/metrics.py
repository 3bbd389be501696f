"""Accuracy metrics for localization estimates."""

from typing import Sequence

import numpy as np

from packages.scenario.models import NetworkScenario


def rmse(truth: np.ndarray, estimates: Sequence[np.ndarray]) -> float:
    """
    Root mean squared position error over Monte Carlo runs.

    sqrt( 1/(M N) * sum_m sum_j ||x*_j - x_j(m)||^2 )

    Args:
        truth: N x d true positions
        estimates: M arrays of N x d estimated positions

    Returns:
        RMSE as a non-negative float

    Raises:
        ValueError: If there are no runs or shapes disagree
    """
    truth = np.asarray(truth, dtype=float)
    if not len(estimates):
        raise ValueError("rmse needs at least one run")
    total = 0.0
    for run, estimate in enumerate(estimates):
        estimate = np.asarray(estimate, dtype=float)
        if estimate.shape != truth.shape:
            raise ValueError(
                f"run {run}: estimate shape {estimate.shape} does not match truth {truth.shape}"
            )
        total += float(np.sum((truth - estimate) ** 2))
    n_points = truth.shape[0] if truth.ndim else 0
    if n_points == 0:
        return 0.0
    return float(np.sqrt(total / (len(estimates) * n_points)))


def ml_objective(scn: NetworkScenario, positions: np.ndarray) -> float:
    """Weighted least-squares range misfit: the nonconvex maximum-likelihood cost."""
    x = np.asarray(positions, dtype=float).reshape(-1, scn.dim)
    anchors = scn.anchor_array()
    cost = 0.0
    for m in scn.range_measurements:
        cost += (m.r - float(np.linalg.norm(x[m.i] - x[m.j]))) ** 2 / m.var
    for m in scn.anchor_measurements:
        cost += (m.y - float(np.linalg.norm(x[m.i] - anchors[m.j]))) ** 2 / m.var
    return cost
