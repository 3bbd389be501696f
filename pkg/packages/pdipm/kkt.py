"""Reduced KKT system and search directions.

Eliminating dz = F^-1 (r_c - U dx) and dlam = E^-1 (r_c_lin - Lam D dy) from
the linearized KKT system leaves, for w = (dy, dx^1, ..., dx^q),

    [ H   B^T ] [ w  ]   [ r   ]
    [ B   0   ] [ dv ] = [ r_p ]

the optimality conditions of min 1/2 w^T H w - r^T w subject to B w = r_p.
Per agent, H holds -D^T E^-1 Lam D on J_k and F^-1 U = skron(W^-1, W^-1) on
x^k; r holds r_d_lin - D^T E^-1 r_c_lin on J_k and r_d + F^-1 r_c on x^k.
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from packages.pdipm.errors import KKTSingularError
from packages.pdipm.residuals import AgentResiduals, Residuals
from packages.pdipm.state import AgentIterate, IterateState
from packages.relaxation.subproblem import AgentSubproblem
from packages.sdplinalg.factorization import SingularFactorizationError, SymmetricIndefiniteFactor

logger = logging.getLogger("treeloc.pdipm.kkt")


@dataclass
class AgentQP:
    """
    One agent's term of the reduced QP over its local w = (dy_J, dx).

    Objective 1/2 w^T hessian w + linear^T w, constraints eq_mat w = eq_rhs.
    """

    hessian: np.ndarray
    linear: np.ndarray
    eq_mat: np.ndarray
    eq_rhs: np.ndarray


@dataclass
class AgentDirection:
    dx: np.ndarray
    dz: np.ndarray
    dv: np.ndarray
    dv_bar: np.ndarray
    dlam: np.ndarray


@dataclass
class SearchDirection:
    dy: np.ndarray
    agents: list[AgentDirection]


@dataclass
class ReducedSystem:
    hessian: np.ndarray
    linear: np.ndarray
    eq_mat: np.ndarray
    eq_rhs: np.ndarray
    x_offsets: list[int]
    row_offsets: list[int]


def reduced_blocks(
    sub: AgentSubproblem, it: AgentIterate, y_local: np.ndarray, res: AgentResiduals
) -> AgentQP:
    """Build the agent's Hessian, linear term and equality rows of the reduced QP."""
    slack = sub.d_mat @ y_local - sub.g_vec  # E = diag(slack), negative
    h_y = -sub.d_mat.T @ ((it.lam / slack)[:, None] * sub.d_mat)
    r_y = res.r_d_lin_part - sub.d_mat.T @ (res.r_c_lin / slack)

    h_x = np.zeros((sub.n_x, sub.n_x))
    r_x = res.r_d.copy()
    for s, scaling in zip(sub.block_slices, res.scalings):
        h_x[s, s] = scaling.hessian
        r_x[s] += np.linalg.solve(scaling.f_op, res.r_c[s])

    hessian = scipy.linalg.block_diag(h_y, h_x)
    eq_mat = np.block(
        [
            [sub.w_mat, sub.q_mat],
            [sub.a_mat, np.zeros((sub.n_linear, sub.n_x))],
        ]
    )
    return AgentQP(
        hessian=0.5 * (hessian + hessian.T),
        linear=-np.concatenate([r_y, r_x]),
        eq_mat=eq_mat,
        eq_rhs=np.concatenate([res.r_p, res.r_p_lin]),
    )


def local_positions(sub: AgentSubproblem, x_offset: int) -> np.ndarray:
    """Positions of the agent's local w inside the global w."""
    return np.concatenate([sub.var_index, x_offset + np.arange(sub.n_x)])


def assemble_reduced_system(
    state: IterateState, residuals: Residuals, subproblems: Sequence[AgentSubproblem]
) -> ReducedSystem:
    n_y = len(state.y)
    x_offsets, row_offsets = [], []
    n_w, n_eq = n_y, 0
    for sub in subproblems:
        x_offsets.append(n_w)
        row_offsets.append(n_eq)
        n_w += sub.n_x
        n_eq += sub.n_equalities

    hessian = np.zeros((n_w, n_w))
    linear = np.zeros(n_w)
    eq_mat = np.zeros((n_eq, n_w))
    eq_rhs = np.zeros(n_eq)
    for sub, it, res, x_off, row_off in zip(
        subproblems, state.agents, residuals.agents, x_offsets, row_offsets
    ):
        qp = reduced_blocks(sub, it, state.y[sub.var_index], res)
        pos = local_positions(sub, x_off)
        rows = slice(row_off, row_off + sub.n_equalities)
        hessian[np.ix_(pos, pos)] += qp.hessian
        linear[pos] += qp.linear
        eq_mat[rows, pos] = qp.eq_mat
        eq_rhs[rows] = qp.eq_rhs
    return ReducedSystem(hessian, linear, eq_mat, eq_rhs, x_offsets, row_offsets)


def recover_agent_direction(
    sub: AgentSubproblem,
    it: AgentIterate,
    y_local: np.ndarray,
    res: AgentResiduals,
    dy_local: np.ndarray,
    dx: np.ndarray,
    dnu: np.ndarray,
) -> AgentDirection:
    """Back out dz and dlam from (dy, dx) and split the equality multipliers."""
    dz = np.zeros(sub.n_x)
    for s, scaling in zip(sub.block_slices, res.scalings):
        dz[s] = np.linalg.solve(scaling.f_op, res.r_c[s] - scaling.u_op @ dx[s])
    slack = sub.d_mat @ y_local - sub.g_vec
    dlam = (res.r_c_lin - it.lam * (sub.d_mat @ dy_local)) / slack
    return AgentDirection(
        dx=dx,
        dz=dz,
        dv=dnu[: sub.n_coupling],
        dv_bar=dnu[sub.n_coupling :],
        dlam=dlam,
    )


def solve_kkt_centralized(
    state: IterateState, residuals: Residuals, subproblems: Sequence[AgentSubproblem]
) -> SearchDirection:
    """
    Solve the reduced KKT system with one dense symmetric-indefinite factorization.

    Raises:
        KKTSingularError: If the saddle-point matrix is singular
    """
    system = assemble_reduced_system(state, residuals, subproblems)
    n_w = system.hessian.shape[0]
    n_eq = system.eq_mat.shape[0]
    kkt = np.zeros((n_w + n_eq, n_w + n_eq))
    kkt[:n_w, :n_w] = system.hessian
    kkt[n_w:, :n_w] = system.eq_mat
    kkt[:n_w, n_w:] = system.eq_mat.T
    rhs = np.concatenate([-system.linear, system.eq_rhs])
    try:
        solution = SymmetricIndefiniteFactor(kkt).solve(rhs)
    except SingularFactorizationError as e:
        raise KKTSingularError(f"KKT singular: {e}", state=state) from e

    n_y = len(state.y)
    dy = solution[:n_y]
    agents = []
    for sub, it, res, x_off, row_off in zip(
        subproblems, state.agents, residuals.agents, system.x_offsets, system.row_offsets
    ):
        dx = solution[x_off : x_off + sub.n_x]
        dnu = solution[n_w + row_off : n_w + row_off + sub.n_equalities]
        agents.append(
            recover_agent_direction(
                sub, it, state.y[sub.var_index], res, dy[sub.var_index], dx, dnu
            )
        )
    logger.debug(f"centralized KKT of order {n_w + n_eq} solved")
    return SearchDirection(dy=dy, agents=agents)


class _Equation:
    """Accumulates ||lhs - rhs|| against the norms of its terms across agents."""

    def __init__(self):
        self.residual_sq = 0.0
        self.scale = 0.0

    def add(self, rhs: np.ndarray, *terms: np.ndarray) -> None:
        lhs = sum(terms) if terms else np.zeros_like(rhs)
        diff = lhs - rhs
        self.residual_sq += float(diff @ diff)
        self.scale += float(np.linalg.norm(rhs)) + sum(float(np.linalg.norm(t)) for t in terms)

    def relative(self) -> float:
        return math.sqrt(self.residual_sq) / self.scale if self.scale > 0 else 0.0


def linearized_residual(
    state: IterateState,
    residuals: Residuals,
    direction: SearchDirection,
    subproblems: Sequence[AgentSubproblem],
) -> float:
    """
    Substitute a direction into the six linearized KKT equations.

    Returns:
        Largest normwise relative residual ||lhs - rhs|| / (sum of term norms + ||rhs||)
    """
    dual_lin, dual, comp, comp_lin, primal, primal_lin = (_Equation() for _ in range(6))
    dual_lin_sum = np.zeros_like(state.y)
    dual_lin_scale = float(np.linalg.norm(residuals.r_d_lin))
    for sub, it, res, d in zip(subproblems, state.agents, residuals.agents, direction.agents):
        y_local = state.y[sub.var_index]
        dy_local = direction.dy[sub.var_index]
        term = sub.w_mat.T @ d.dv + sub.a_mat.T @ d.dv_bar + sub.d_mat.T @ d.dlam
        np.add.at(dual_lin_sum, sub.var_index, term)
        dual_lin_scale += sum(
            float(np.linalg.norm(t))
            for t in (sub.w_mat.T @ d.dv, sub.a_mat.T @ d.dv_bar, sub.d_mat.T @ d.dlam)
        )
        dual.add(res.r_d, sub.q_mat.T @ d.dv, -d.dz)
        for s, scaling in zip(sub.block_slices, res.scalings):
            comp.add(res.r_c[s], scaling.u_op @ d.dx[s], scaling.f_op @ d.dz[s])
        slack = sub.d_mat @ y_local - sub.g_vec
        comp_lin.add(res.r_c_lin, it.lam * (sub.d_mat @ dy_local), slack * d.dlam)
        primal.add(res.r_p, sub.q_mat @ d.dx, sub.w_mat @ dy_local)
        primal_lin.add(res.r_p_lin, sub.a_mat @ dy_local)

    diff = dual_lin_sum - residuals.r_d_lin
    dual_lin.residual_sq = float(diff @ diff)
    dual_lin.scale = dual_lin_scale
    return max(eq.relative() for eq in (dual_lin, dual, comp, comp_lin, primal, primal_lin))
