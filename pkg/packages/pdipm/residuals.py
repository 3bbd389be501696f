"""Residuals of the perturbed KKT conditions.

With Lagrangian c^T y + cx^T x + v^T (Q x + W y - b) + v_bar^T (A y - b_bar)
+ lam^T (D y - g) - z^T x, per agent:

    r_d     = z - Q^T v - cx
    r_c     = svec(delta I - H_P(X Z)) per block, P = G^-1 from the NT scaling
    r_c_lin = -delta 1 - diag(lam) (D y - g)
    r_p     = b - Q x - W y
    r_p_lin = b_bar - A y

and globally r_d_lin = -sum_k E_Jk^T (c + W^T v + A^T v_bar + D^T lam).
"""

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from packages.pdipm.state import AgentIterate, IterateState, blocks
from packages.relaxation.subproblem import AgentSubproblem
from packages.sdplinalg.scaling import ScalingPoint, nt_scaling
from packages.sdplinalg.svec import h_op, svec


@dataclass
class AgentResiduals:
    r_d: np.ndarray
    r_c: np.ndarray
    r_c_lin: np.ndarray
    r_p: np.ndarray
    r_p_lin: np.ndarray
    r_d_lin_part: np.ndarray  # this agent's term of r_d_lin, on J_k
    scalings: list[ScalingPoint] = field(default_factory=list)


@dataclass
class Residuals:
    r_d_lin: np.ndarray
    agents: list[AgentResiduals]
    primal: float = 0.0
    primal_lin: float = 0.0
    dual: float = 0.0
    dual_lin: float = 0.0

    def scaled_max(self, b_norm: float) -> float:
        return max(self.primal, self.primal_lin, self.dual, self.dual_lin) / (1.0 + b_norm)


def agent_feasibility(
    sub: AgentSubproblem, it: AgentIterate, y_local: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(r_p, r_p_lin, r_d, this agent's r_d_lin term); none of them depend on delta."""
    r_p = sub.b_vec - sub.q_mat @ it.x - sub.w_mat @ y_local
    r_p_lin = sub.b_bar - sub.a_mat @ y_local
    r_d = it.z - sub.q_mat.T @ it.v - sub.cx_vec
    r_d_lin_part = -(
        sub.c_vec + sub.w_mat.T @ it.v + sub.a_mat.T @ it.v_bar + sub.d_mat.T @ it.lam
    )
    return r_p, r_p_lin, r_d, r_d_lin_part


def agent_residuals(
    sub: AgentSubproblem, it: AgentIterate, y_local: np.ndarray, delta: float
) -> AgentResiduals:
    r_p, r_p_lin, r_d, r_d_lin_part = agent_feasibility(sub, it, y_local)
    scalings = []
    r_c = np.zeros(sub.n_x)
    for s, x_blk, z_blk in zip(sub.block_slices, blocks(sub, it.x), blocks(sub, it.z)):
        scaling = nt_scaling(x_blk, z_blk)
        scalings.append(scaling)
        n = x_blk.shape[0]
        r_c[s] = svec(delta * np.eye(n) - h_op(scaling.g_inv, x_blk @ z_blk))
    r_c_lin = -delta - it.lam * (sub.d_mat @ y_local - sub.g_vec)
    return AgentResiduals(
        r_d=r_d,
        r_c=r_c,
        r_c_lin=r_c_lin,
        r_p=r_p,
        r_p_lin=r_p_lin,
        r_d_lin_part=r_d_lin_part,
        scalings=scalings,
    )


def _norm(parts: Sequence[np.ndarray]) -> float:
    return math.sqrt(sum(float(p @ p) for p in parts))


def compute_residuals(
    state: IterateState, subproblems: Sequence[AgentSubproblem]
) -> Residuals:
    """Evaluate every residual at state with perturbation state.delta."""
    agents = [
        agent_residuals(sub, it, state.y[sub.var_index], state.delta)
        for sub, it in zip(subproblems, state.agents)
    ]
    r_d_lin = np.zeros_like(state.y)
    for sub, res in zip(subproblems, agents):
        np.add.at(r_d_lin, sub.var_index, res.r_d_lin_part)
    return Residuals(
        r_d_lin=r_d_lin,
        agents=agents,
        primal=_norm([a.r_p for a in agents]),
        primal_lin=_norm([a.r_p_lin for a in agents]),
        dual=_norm([a.r_d for a in agents]),
        dual_lin=float(np.linalg.norm(r_d_lin)),
    )


def constraint_norm(subproblems: Sequence[AgentSubproblem]) -> float:
    """||b|| over all coupling and linear equality right-hand sides."""
    return _norm([sub.b_vec for sub in subproblems] + [sub.b_bar for sub in subproblems])
