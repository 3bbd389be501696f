"""Primal-dual iterates of the coupled SDP."""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from packages.relaxation.subproblem import AgentSubproblem
from packages.sdplinalg.svec import smat, svec


@dataclass
class AgentIterate:
    """
    One agent's share of the iterate.

    x and z stack the svec of the primal and dual blocks; v and v_bar are the
    multipliers of the coupling and linear equalities; lam those of D y <= g.
    """

    x: np.ndarray
    z: np.ndarray
    v: np.ndarray
    v_bar: np.ndarray
    lam: np.ndarray

    def copy(self) -> "AgentIterate":
        return AgentIterate(
            self.x.copy(), self.z.copy(), self.v.copy(), self.v_bar.copy(), self.lam.copy()
        )


@dataclass
class IterateState:
    y: np.ndarray
    agents: list[AgentIterate] = field(default_factory=list)
    delta: float = 1.0

    def copy(self) -> "IterateState":
        return IterateState(self.y.copy(), [a.copy() for a in self.agents], self.delta)


def problem_dimension(subproblems: Sequence[AgentSubproblem]) -> int:
    return max((int(sub.var_index.max()) + 1 for sub in subproblems if sub.n_j), default=0)


def blocks(sub: AgentSubproblem, packed: np.ndarray) -> list[np.ndarray]:
    """Unpack a stacked svec vector into the agent's symmetric blocks."""
    return [smat(packed[s]) for s in sub.block_slices]


def initial_agent_iterate(sub: AgentSubproblem) -> AgentIterate:
    identity = np.zeros(0)
    if sub.n_x:
        identity = np.concatenate([svec(np.eye(n)) for n in sub.block_orders])
    return AgentIterate(
        x=identity.copy(),
        z=identity.copy(),
        v=np.zeros(sub.n_coupling),
        v_bar=np.zeros(sub.n_linear),
        lam=np.ones(sub.n_inequalities),
    )


def initial_y(subproblems: Sequence[AgentSubproblem], n_y: Optional[int] = None) -> np.ndarray:
    y = np.zeros(problem_dimension(subproblems) if n_y is None else n_y)
    for sub in subproblems:
        owned = sub.y_start != 0.0
        y[sub.var_index[owned]] = sub.y_start[owned]
    return y


def agent_complementarity(
    sub: AgentSubproblem, it: AgentIterate, y_local: np.ndarray
) -> tuple[float, int]:
    """(sum of <X_j, Z_j> + lam^T (g - D y), block orders + inequality count)."""
    slack = sub.g_vec - sub.d_mat @ y_local
    total = float(it.x @ it.z) + float(it.lam @ slack)
    return total, sum(sub.block_orders) + sub.n_inequalities


def duality_measure(state: IterateState, subproblems: Sequence[AgentSubproblem]) -> float:
    """mu = (sum_k <X^k, Z^k> + lam^k^T (g^k - D^k y)) / (sum of block orders + inequalities)."""
    total, count = 0.0, 0
    for sub, it in zip(subproblems, state.agents):
        part, n = agent_complementarity(sub, it, state.y[sub.var_index])
        total += part
        count += n
    return total / count if count else 0.0


def initial_iterate(
    subproblems: Sequence[AgentSubproblem], n_y: Optional[int] = None
) -> IterateState:
    """
    Identity blocks, unit multipliers, zero equality duals and the start y.

    y takes each subproblem's y_start (positive distance variables) so that
    D y < g holds strictly; delta starts at the duality measure of this point.
    """
    state = IterateState(
        y=initial_y(subproblems, n_y),
        agents=[initial_agent_iterate(sub) for sub in subproblems],
    )
    state.delta = duality_measure(state, subproblems)
    return state


def agent_is_interior(sub: AgentSubproblem, it: AgentIterate, y_local: np.ndarray) -> bool:
    if np.any(it.lam <= 0) or np.any(sub.g_vec - sub.d_mat @ y_local <= 0):
        return False
    for s in sub.block_slices:
        if np.linalg.eigvalsh(smat(it.x[s]))[0] <= 0 or np.linalg.eigvalsh(smat(it.z[s]))[0] <= 0:
            return False
    return True


def is_strictly_interior(state: IterateState, subproblems: Sequence[AgentSubproblem]) -> bool:
    return all(
        agent_is_interior(sub, it, state.y[sub.var_index])
        for sub, it in zip(subproblems, state.agents)
    )
