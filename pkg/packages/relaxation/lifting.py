"""Moving between sensor positions and points of the relaxation."""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from packages.relaxation.assignment import RelaxationError
from packages.relaxation.indexing import GlobalVariableIndex
from packages.relaxation.subproblem import AgentSubproblem
from packages.scenario.models import NetworkScenario
from packages.sdplinalg.svec import smat


@dataclass
class LiftedPoint:
    y: np.ndarray
    x_blocks: list[np.ndarray]


def extract_positions(index: GlobalVariableIndex, y: np.ndarray) -> np.ndarray:
    """
    Read the sensor positions out of y.

    Returns:
        N x d array in sensor order

    Raises:
        RelaxationError: If y does not have length n_y
    """
    y = np.asarray(y, dtype=float)
    if y.shape != (index.n_y,):
        raise RelaxationError(f"y has shape {y.shape}, expected ({index.n_y},)")
    return y[: index.n_sensors * index.dim].reshape(index.n_sensors, index.dim).copy()


def lift_point(
    index: GlobalVariableIndex,
    subproblems: Sequence[AgentSubproblem],
    positions: np.ndarray,
    scn: NetworkScenario,
) -> LiftedPoint:
    """
    Lift sensor positions to a point of the relaxation.

    S = X^T X on the pattern, D and Z are the exact distances, Lambda = D^2,
    Xi = Z^2, and every block is read off its defining equality.
    """
    x = np.asarray(positions, dtype=float).reshape(index.n_sensors, index.dim)
    anchors = scn.anchor_array()
    y = np.zeros(index.n_y)
    y[: x.size] = x.ravel()
    for (i, j), slot in index.s_entries.items():
        y[slot] = float(x[i] @ x[j])
    for (i, j), (lam, dist) in index.range_entries.items():
        d = float(np.linalg.norm(x[i] - x[j]))
        y[dist], y[lam] = d, d * d
    for (i, j), (xi, z) in index.anchor_entries.items():
        d = float(np.linalg.norm(x[i] - anchors[j]))
        y[z], y[xi] = d, d * d
    blocks = [
        np.linalg.solve(sub.q_mat, sub.b_vec - sub.w_mat @ y[sub.var_index]) for sub in subproblems
    ]
    return LiftedPoint(y=y, x_blocks=blocks)


def relaxation_objective(
    subproblems: Sequence[AgentSubproblem], y: np.ndarray, x_blocks: Sequence[np.ndarray]
) -> float:
    """Sum over agents of c^T y_J + cx^T x + offset."""
    total = 0.0
    for sub, x in zip(subproblems, x_blocks):
        total += float(sub.c_vec @ y[sub.var_index]) + float(sub.cx_vec @ x) + sub.offset
    return total


def measurement_cost(index: GlobalVariableIndex, scn: NetworkScenario, y: np.ndarray) -> float:
    """Weighted measurement cost f(Lambda, Xi, D, Z) evaluated on y."""
    cost = 0.0
    for m in scn.range_measurements:
        lam, dist = index.range_entries[(m.i, m.j)]
        cost += (y[lam] - 2.0 * m.r * y[dist] + m.r**2) / m.var
    for m in scn.anchor_measurements:
        xi, z = index.anchor_entries[(m.i, m.j)]
        cost += (y[xi] - 2.0 * m.y * y[z] + m.y**2) / m.var
    return cost


def rank_diagnostics(
    subproblems: Sequence[AgentSubproblem], x_blocks: Sequence[np.ndarray], dim: int
) -> list[dict]:
    """
    Eigenvalue ratios measuring how far each block is from its target rank.

    For T blocks the ratio is lambda_{d+1} / lambda_d, for 2x2 blocks
    lambda_2 / lambda_1 (eigenvalues in descending order). 0 means tight.
    """
    rows = []
    for sub, x in zip(subproblems, x_blocks):
        for key, block in zip(sub.block_keys, sub.block_slices):
            eig = np.sort(np.linalg.eigvalsh(smat(x[block])))[::-1]
            target = dim if key[0] == "T" else 1
            ratio = 0.0
            if len(eig) > target and eig[target - 1] > 0:
                ratio = float(max(eig[target], 0.0) / eig[target - 1])
            rows.append(
                {"agent": sub.agent, "block": key, "eigenvalues": eig.tolist(), "ratio": ratio}
            )
    return rows
