"""Agents of the clique tree and their separator/residual coordinate split."""

import logging
from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np

from packages.graphcore.clique_tree import CliqueTree, tree_height
from packages.msgpass.errors import MessagePassingError
from packages.relaxation.indexing import GlobalVariableIndex
from packages.relaxation.subproblem import AgentSubproblem
from packages.sdplinalg.svec import svec_dim

logger = logging.getLogger("treeloc.msgpass.agents")


@dataclass(frozen=True, eq=False)
class AgentNode:
    """
    One agent of the tree.

    The local direction is w = (dy_J, dx) of length n_j + n_x. separator holds
    the global y coordinates shared with the parent (empty at the root); every
    other local coordinate is residual and is eliminated by this agent.
    """

    agent: int
    parent: Optional[int]
    children: tuple[int, ...]
    var_index: np.ndarray
    n_x: int
    n_equalities: int
    separator: np.ndarray
    subproblem: Optional[AgentSubproblem] = None

    @property
    def is_root(self) -> bool:
        return self.parent is None

    @property
    def n_j(self) -> int:
        return len(self.var_index)

    @property
    def n_local(self) -> int:
        return self.n_j + self.n_x

    @property
    def separator_positions(self) -> np.ndarray:
        return np.searchsorted(self.var_index, self.separator)

    @property
    def residual_positions(self) -> np.ndarray:
        keep = np.ones(self.n_local, dtype=bool)
        keep[self.separator_positions] = False
        return np.flatnonzero(keep)

    @property
    def s_k(self) -> int:
        return len(self.separator)

    @property
    def r_k(self) -> int:
        return self.n_local - self.s_k

    @property
    def e_k(self) -> int:
        return self.n_equalities

    @property
    def factor_order(self) -> int:
        return self.r_k + self.e_k

    @property
    def message_payload(self) -> int:
        """Scalars in the quadratic message to the parent: s(s+1)/2 + s."""
        return svec_dim(self.s_k) + self.s_k if self.s_k else 0


def expected_separator(
    index: GlobalVariableIndex, shared_sensors: Sequence[int]
) -> np.ndarray:
    """Positions of shared sensors and the S entries among them."""
    coords = [int(c) for i in shared_sensors for c in index.x_indices(i)]
    coords += [
        index.s_index(i, j)
        for a, i in enumerate(shared_sensors)
        for j in shared_sensors[a:]
    ]
    return np.array(sorted(coords), dtype=int)


def build_agent_tree(
    tree: CliqueTree, index: GlobalVariableIndex, subproblems: Sequence[AgentSubproblem]
) -> list[AgentNode]:
    """
    Attach a subproblem to every clique and split its coordinates.

    The separator of agent k is J_k & J_parent(k); it must consist of exactly
    the positions x_i and the S entries of the clique separator U_k, so that
    s_k = d |U_k| + |U_k| (|U_k| + 1) / 2.

    Raises:
        MessagePassingError: If the subproblems do not match the tree or a
            separator differs from the clique separator's coordinates
    """
    if len(subproblems) != tree.size:
        raise MessagePassingError(
            f"{len(subproblems)} subproblems for a tree of {tree.size} cliques"
        )
    agents = []
    for k, sub in enumerate(subproblems):
        if sub.agent != k:
            raise MessagePassingError(f"subproblem {k} belongs to agent {sub.agent}")
        if np.any(np.diff(sub.var_index) <= 0):
            raise MessagePassingError(f"agent {k} index set is not strictly increasing")
        parent = tree.parent.get(k)
        separator = np.zeros(0, dtype=int)
        if parent is not None:
            separator = np.intersect1d(sub.var_index, subproblems[parent].var_index)
            expected = expected_separator(index, tree.separators[k])
            if not np.array_equal(separator, expected):
                raise MessagePassingError(
                    f"agent {k} shares {len(separator)} coordinates with agent {parent}, "
                    f"expected {len(expected)} from separator {tree.separators[k]}"
                )
        agents.append(
            AgentNode(
                agent=k,
                parent=parent,
                children=tuple(tree.children(k)),
                var_index=sub.var_index,
                n_x=sub.n_x,
                n_equalities=sub.n_equalities,
                separator=separator,
                subproblem=sub,
            )
        )
    logger.info(
        f"agent tree: {len(agents)} agents, height {tree_height(tree)}, "
        f"largest factorization {max(a.factor_order for a in agents)}",
        extra={"agents": len(agents)},
    )
    return agents


def root_of(agents: Sequence[AgentNode]) -> int:
    roots = [a.agent for a in agents if a.is_root]
    if len(roots) != 1:
        raise MessagePassingError(f"expected one root, found {len(roots)}")
    return roots[0]


def agent_pre_order(agents: Sequence[AgentNode]) -> list[int]:
    """Parents before children; children in ascending id."""
    order = []
    stack = [root_of(agents)]
    while stack:
        k = stack.pop()
        order.append(k)
        stack.extend(reversed(agents[k].children))
    return order


def agent_post_order(agents: Sequence[AgentNode]) -> list[int]:
    """Children before parents, siblings in ascending id."""
    order = []
    stack = [root_of(agents)]
    while stack:
        k = stack.pop()
        order.append(k)
        stack.extend(agents[k].children)
    return order[::-1]


def agent_height(agents: Sequence[AgentNode]) -> int:
    depth = {}
    for k in agent_pre_order(agents):
        parent = agents[k].parent
        depth[k] = 0 if parent is None else depth[parent] + 1
    return max(depth.values())


def complexity_report(agents: Sequence[AgentNode]) -> list[dict[str, Any]]:
    """Per-agent sizes: |C_k|, b_k, a_k, n_k, e_k, s_k, r_k, r_k + e_k and the message payload."""
    rows = []
    for a in agents:
        sub = a.subproblem
        rows.append(
            {
                "agent": a.agent,
                "parent": a.parent,
                "clique_size": len(sub.clique) if sub is not None else None,
                "n_range": sub.n_range if sub is not None else None,
                "n_anchor": sub.n_anchor if sub is not None else None,
                "n_k": a.n_local,
                "e_k": a.e_k,
                "s_k": a.s_k,
                "r_k": a.r_k,
                "factor_order": a.factor_order,
                "message_payload": a.message_payload,
            }
        )
    return rows
