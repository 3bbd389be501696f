"""Quadratic messages: exact elimination of the reduced KKT system over the agent tree.

Agent k holds the term 1/2 w^T H w + g^T w of the reduced QP over its local
w = (dy_J, dx), with equality rows B w = b, plus the messages of its
children. Splitting w into separator coordinates S (shared with the parent)
and residual coordinates R, and eliminating R and the multipliers nu with

    K = [ H_RR  B_R^T ]     N = [ H_RS ]
        [ B_R   0     ]         [ B_S  ]

gives (w_R, nu) = a0 + A1 w_S with a0 = K^-1 (-g_R, b), A1 = -K^-1 N, and the
message 1/2 w_S^T (H_SS - N^T K^-1 N) w_S + (g_S + N^T a0)^T w_S.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from packages.msgpass.agents import AgentNode, agent_post_order, agent_pre_order
from packages.msgpass.bus import MessageBus
from packages.msgpass.commlog import PASS_DIRECTION, SWEEP_DOWN, SWEEP_UP
from packages.msgpass.errors import AgentKKTSingularError, MessagePassingError
from packages.pdipm.kkt import AgentQP, reduced_blocks
from packages.pdipm.residuals import AgentResiduals
from packages.pdipm.state import AgentIterate
from packages.sdplinalg.factorization import SingularFactorizationError, SymmetricIndefiniteFactor
from packages.sdplinalg.svec import svec_dim

logger = logging.getLogger("treeloc.msgpass.messages")


@dataclass(frozen=True, eq=False)
class QuadraticMessage:
    """1/2 w_S^T hessian w_S + linear^T w_S over the global y coordinates coords."""

    sender: int
    coords: np.ndarray
    hessian: np.ndarray
    linear: np.ndarray

    @property
    def payload(self) -> int:
        s = len(self.coords)
        return svec_dim(s) + s


@dataclass(eq=False)
class LocalElimination:
    agent: int
    separator_positions: np.ndarray
    residual_positions: np.ndarray
    n_local: int
    offset: np.ndarray
    gain: np.ndarray

    def solve(self, separator_values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Local direction w and equality multipliers for fixed separator values."""
        solution = self.offset + self.gain @ separator_values
        n_r = len(self.residual_positions)
        w = np.zeros(self.n_local)
        w[self.separator_positions] = separator_values
        w[self.residual_positions] = solution[:n_r]
        return w, solution[n_r:]


def local_qp_blocks(
    agent: AgentNode, it: AgentIterate, y_local: np.ndarray, res: AgentResiduals
) -> AgentQP:
    """The agent's term of the reduced QP, built from local data only."""
    return reduced_blocks(agent.subproblem, it, y_local, res)


def message_positions(agent: AgentNode, coords: np.ndarray) -> np.ndarray:
    positions = np.searchsorted(agent.var_index, coords)
    if len(coords) and (
        positions.max() >= agent.n_j or not np.array_equal(agent.var_index[positions], coords)
    ):
        raise MessagePassingError(f"message coordinates outside agent {agent.agent}'s index set")
    return positions


def fold_messages(
    agent: AgentNode, qp: AgentQP, child_messages: Sequence[QuadraticMessage]
) -> tuple[np.ndarray, np.ndarray]:
    """Add child messages to the local QP in ascending sender order."""
    hessian = qp.hessian.copy()
    linear = qp.linear.copy()
    for message in sorted(child_messages, key=lambda m: m.sender):
        pos = message_positions(agent, message.coords)
        hessian[np.ix_(pos, pos)] += message.hessian
        linear[pos] += message.linear
    return hessian, linear


def upward_message(
    agent: AgentNode, child_messages: Sequence[QuadraticMessage], qp: AgentQP
) -> tuple[Optional[QuadraticMessage], LocalElimination]:
    """
    Eliminate the agent's residual coordinates with one factorization.

    Args:
        agent: The eliminating agent
        child_messages: One message per child
        qp: The agent's own term of the reduced QP

    Returns:
        (message to the parent, or None at the root; the elimination used
        later by the downward solve)

    Raises:
        AgentKKTSingularError: If the order r_k + e_k saddle-point matrix is singular
    """
    if len(child_messages) != len(agent.children):
        raise MessagePassingError(
            f"agent {agent.agent} expects {len(agent.children)} messages, got {len(child_messages)}"
        )
    hessian, linear = fold_messages(agent, qp, child_messages)
    sep = agent.separator_positions
    res = agent.residual_positions
    n_r = len(res)
    n_e = qp.eq_mat.shape[0]
    b_r = qp.eq_mat[:, res]
    b_s = qp.eq_mat[:, sep]

    kkt = np.zeros((n_r + n_e, n_r + n_e))
    kkt[:n_r, :n_r] = hessian[np.ix_(res, res)]
    kkt[n_r:, :n_r] = b_r
    kkt[:n_r, n_r:] = b_r.T
    coupling = np.vstack([hessian[np.ix_(res, sep)], b_s])
    rhs = np.column_stack([np.concatenate([-linear[res], qp.eq_rhs]), -coupling])
    try:
        solution = SymmetricIndefiniteFactor(kkt).solve(rhs)
    except SingularFactorizationError as e:
        raise AgentKKTSingularError(agent.agent, str(e)) from e

    offset, gain = solution[:, 0], solution[:, 1:]
    elimination = LocalElimination(
        agent=agent.agent,
        separator_positions=sep,
        residual_positions=res,
        n_local=agent.n_local,
        offset=offset,
        gain=gain,
    )
    if agent.is_root:
        return None, elimination

    msg_hessian = hessian[np.ix_(sep, sep)] + coupling.T @ gain
    message = QuadraticMessage(
        sender=agent.agent,
        coords=agent.separator,
        hessian=0.5 * (msg_hessian + msg_hessian.T),
        linear=linear[sep] + coupling.T @ offset,
    )
    logger.debug(
        f"agent {agent.agent}: factorized order {n_r + n_e}, message over {len(sep)} coordinates",
        extra={"agent": agent.agent},
    )
    return message, elimination


def upward_pass(
    agents: Sequence[AgentNode], qps: dict[int, AgentQP], bus: MessageBus
) -> dict[int, LocalElimination]:
    """Leaves to root: every agent folds its children's messages and reports to its parent."""
    order = agent_post_order(agents)
    eliminations = {}
    bus.open_sweep(PASS_DIRECTION, SWEEP_UP, order)
    for k in order:
        node = agents[k]
        received = [bus.receive(c, k) for c in node.children]
        message, eliminations[k] = upward_message(node, received, qps[k])
        bus.log.count_factorization(k)
        if message is not None:
            bus.send(k, node.parent, message, message.payload)
    bus.close_sweep()
    return eliminations


def root_and_downward_solve(
    agents: Sequence[AgentNode],
    eliminations: dict[int, LocalElimination],
    bus: MessageBus,
) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    """
    Root to leaves: the root solves its full system, every other agent fixes
    its separator to the parent's values and recovers its residual coordinates.

    Returns:
        Per agent, the local direction w = (dy_J, dx) and equality multipliers
    """
    order = agent_pre_order(agents)
    solutions = {}
    bus.open_sweep(PASS_DIRECTION, SWEEP_DOWN, order)
    for k in order:
        node = agents[k]
        values = np.zeros(0) if node.is_root else bus.receive(node.parent, k)
        w, nu = eliminations[k].solve(values)
        solutions[k] = (w, nu)
        for c in node.children:
            shared = w[message_positions(node, agents[c].separator)]
            bus.send(k, c, shared, len(shared))
    bus.close_sweep()
    return solutions


def solve_direction_distributed(
    agents: Sequence[AgentNode], qps: dict[int, AgentQP], bus: MessageBus
) -> dict[int, tuple[np.ndarray, np.ndarray]]:
    """One upward and one downward sweep; exact for the reduced KKT system."""
    return root_and_downward_solve(agents, upward_pass(agents, qps, bus), bus)
