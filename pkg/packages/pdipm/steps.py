"""Fraction-to-boundary step sizes and iterate updates."""

import math
from typing import Sequence

import numpy as np

from packages.pdipm.kkt import AgentDirection, SearchDirection
from packages.pdipm.state import AgentIterate, IterateState, blocks, duality_measure
from packages.relaxation.subproblem import AgentSubproblem
from packages.sdplinalg.scaling import max_step_to_boundary


def _ratio_bound(values: np.ndarray, steps: np.ndarray) -> float:
    """Largest t with values + t * steps > 0 (values > 0)."""
    shrinking = steps < 0
    if not np.any(shrinking):
        return math.inf
    return float(np.min(-values[shrinking] / steps[shrinking]))


def agent_step_bounds(
    sub: AgentSubproblem,
    it: AgentIterate,
    y_local: np.ndarray,
    direction: AgentDirection,
    dy_local: np.ndarray,
) -> tuple[float, float]:
    """
    Distances to the boundary along the direction, before the gamma cut.

    Returns:
        (primal bound over X blocks and the slack g - D y,
         dual bound over Z blocks and lam); math.inf when never reached
    """
    primal = _ratio_bound(sub.g_vec - sub.d_mat @ y_local, -(sub.d_mat @ dy_local))
    for x_blk, dx_blk in zip(blocks(sub, it.x), blocks(sub, direction.dx)):
        primal = min(primal, max_step_to_boundary(x_blk, dx_blk))
    dual = _ratio_bound(it.lam, direction.dlam)
    for z_blk, dz_blk in zip(blocks(sub, it.z), blocks(sub, direction.dz)):
        dual = min(dual, max_step_to_boundary(z_blk, dz_blk))
    return primal, dual


def fraction_to_boundary(bound: float, gamma: float) -> float:
    """t = min(1, gamma * bound)."""
    return min(1.0, gamma * bound)


def step_sizes(
    state: IterateState,
    direction: SearchDirection,
    subproblems: Sequence[AgentSubproblem],
    gamma: float,
) -> tuple[float, float]:
    primal, dual = math.inf, math.inf
    for sub, it, d in zip(subproblems, state.agents, direction.agents):
        p, q = agent_step_bounds(
            sub, it, state.y[sub.var_index], d, direction.dy[sub.var_index]
        )
        primal = min(primal, p)
        dual = min(dual, q)
    return fraction_to_boundary(primal, gamma), fraction_to_boundary(dual, gamma)


def step_agent(it: AgentIterate, d: AgentDirection, t_p: float, t_d: float) -> AgentIterate:
    return AgentIterate(
        x=it.x + t_p * d.dx,
        z=it.z + t_d * d.dz,
        v=it.v + t_d * d.dv,
        v_bar=it.v_bar + t_d * d.dv_bar,
        lam=it.lam + t_d * d.dlam,
    )


def apply_step(
    state: IterateState, direction: SearchDirection, t_p: float, t_d: float
) -> IterateState:
    """Primal variables (y, x) move by t_p, dual variables (z, v, v_bar, lam) by t_d."""
    return IterateState(
        y=state.y + t_p * direction.dy,
        agents=[step_agent(it, d, t_p, t_d) for it, d in zip(state.agents, direction.agents)],
        delta=state.delta,
    )


def update_perturbation(
    state: IterateState, subproblems: Sequence[AgentSubproblem], sigma_c: float
) -> float:
    """delta = sigma_c * mu."""
    return sigma_c * duality_measure(state, subproblems)
