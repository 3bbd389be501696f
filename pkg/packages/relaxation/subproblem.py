"""Per-agent blocks of the coupled standard-form SDP.

Agent k's part of the problem, over its local slice y_J of the global vector:

    minimize    c^T y_J + cx^T x + offset
    subject to  Q x + W y_J = b          (matrix blocks defined by y)
                A y_J = b_bar            (linear equalities)
                D y_J <= g               (linear inequalities)
                x = (svec X_1, ..., svec X_m), every X_j PSD

Blocks are, in order, T (order d + |C|), one 2x2 Gamma block per owned range
measurement and one 2x2 Phi block per owned anchor measurement.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from packages.graphcore.clique_tree import CliqueTree
from packages.relaxation.assignment import Assignment
from packages.relaxation.indexing import GlobalVariableIndex, build_variable_index
from packages.scenario.models import NetworkScenario
from packages.sdplinalg.svec import svec_dim

logger = logging.getLogger("treeloc.relaxation.subproblem")

INITIAL_DISTANCE_FLOOR = 0.1
SQRT2 = math.sqrt(2.0)

BlockKey = tuple


@dataclass(frozen=True, eq=False)
class AgentSubproblem:
    agent: int
    clique: tuple[int, ...]
    block_orders: tuple[int, ...]
    block_keys: tuple[BlockKey, ...]
    var_index: np.ndarray
    q_mat: np.ndarray
    w_mat: np.ndarray
    b_vec: np.ndarray
    a_mat: np.ndarray
    b_bar: np.ndarray
    d_mat: np.ndarray
    g_vec: np.ndarray
    c_vec: np.ndarray
    cx_vec: np.ndarray
    offset: float = 0.0
    y_start: Optional[np.ndarray] = None
    n_range: int = 0
    n_anchor: int = 0
    _slices: tuple[slice, ...] = field(default=(), init=False, repr=False)

    def __post_init__(self):
        starts = np.concatenate([[0], np.cumsum([svec_dim(n) for n in self.block_orders])])
        slices = tuple(slice(int(a), int(b)) for a, b in zip(starts[:-1], starts[1:]))
        object.__setattr__(self, "_slices", slices)
        if self.y_start is None:
            object.__setattr__(self, "y_start", np.zeros(len(self.var_index)))

    @property
    def block_slices(self) -> tuple[slice, ...]:
        return self._slices

    @property
    def n_x(self) -> int:
        return self.q_mat.shape[1]

    @property
    def n_j(self) -> int:
        return len(self.var_index)

    @property
    def n_local(self) -> int:
        """Variables of the local problem: |J_k| linear plus the svec entries of all blocks."""
        return self.n_j + self.n_x

    @property
    def n_coupling(self) -> int:
        return self.q_mat.shape[0]

    @property
    def n_linear(self) -> int:
        return self.a_mat.shape[0]

    @property
    def n_inequalities(self) -> int:
        return self.d_mat.shape[0]

    @property
    def n_equalities(self) -> int:
        return self.n_coupling + self.n_linear


class _BlockBuilder:
    """Accumulates svec rows x_slot = factor * (constant + y_g) for every block entry."""

    def __init__(self, local: dict[int, int]):
        self.local = local
        self.w_rows: list[dict[int, float]] = []
        self.b: list[float] = []
        self.orders: list[int] = []
        self.keys: list[BlockKey] = []

    def add_block(self, key: BlockKey, order: int, entry) -> None:
        cols, rows = np.triu_indices(order)
        for p, q in zip(rows, cols):
            factor = 1.0 if p == q else SQRT2
            constant, global_idx = entry(int(p), int(q))
            row = {}
            if global_idx is not None:
                row[self.local[global_idx]] = -factor
            self.w_rows.append(row)
            self.b.append(factor * constant)
        self.orders.append(order)
        self.keys.append(key)

    def matrices(self, n_j: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        n_rows = len(self.b)
        w = np.zeros((n_rows, n_j))
        for r, row in enumerate(self.w_rows):
            for col, value in row.items():
                w[r, col] = value
        return np.eye(n_rows), w, np.asarray(self.b, dtype=float)


def _build_agent(
    k: int,
    tree: CliqueTree,
    assignment: Assignment,
    index: GlobalVariableIndex,
    scn: NetworkScenario,
) -> AgentSubproblem:
    dim = index.dim
    clique = tree.cliques[k].members
    var_index = index.agent_indices[k]
    local = {int(g): p for p, g in enumerate(var_index)}
    n_j = len(var_index)
    anchors = scn.anchor_array()
    ranges = {(m.i, m.j): m for m in scn.range_measurements}
    anchored = sorted(
        (m for m in scn.anchor_measurements if m.i in assignment.phi_bar[k]),
        key=lambda m: (m.i, m.j),
    )
    owned_ranges = [ranges[pair] for pair in sorted(assignment.phi[k])]

    builder = _BlockBuilder(local)

    def t_entry(p: int, q: int):
        # p >= q; leading d x d corner is the identity
        if p < dim:
            return (1.0 if p == q else 0.0), None
        sensor = clique[p - dim]
        if q < dim:
            return 0.0, sensor * dim + q
        return 0.0, index.s_index(sensor, clique[q - dim])

    builder.add_block(("T",), dim + len(clique), t_entry)

    def pair_entry(lam_idx: int, dist_idx: int):
        def entry(p: int, q: int):
            if p == 0:
                return 1.0, None
            return 0.0, (dist_idx if q == 0 else lam_idx)

        return entry

    for m in owned_ranges:
        builder.add_block(
            ("range", m.i, m.j),
            2,
            pair_entry(index.lam_index(m.i, m.j), index.dist_index(m.i, m.j)),
        )
    for m in anchored:
        builder.add_block(
            ("anchor", m.i, m.j), 2, pair_entry(index.xi_index(m.i, m.j), index.z_index(m.i, m.j))
        )
    q_mat, w_mat, b_vec = builder.matrices(n_j)

    n_lin = len(owned_ranges) + len(anchored)
    a_mat = np.zeros((n_lin, n_j))
    b_bar = np.zeros(n_lin)
    d_mat = np.zeros((n_lin, n_j))
    c_vec = np.zeros(n_j)
    y_start = np.zeros(n_j)
    offset = 0.0
    row = 0
    for m in owned_ranges:
        # S_ii + S_jj - 2 S_ij - Lambda_ij = 0
        a_mat[row, local[index.s_index(m.i, m.i)]] += 1.0
        a_mat[row, local[index.s_index(m.j, m.j)]] += 1.0
        a_mat[row, local[index.s_index(m.i, m.j)]] -= 2.0
        a_mat[row, local[index.lam_index(m.i, m.j)]] = -1.0
        dist = local[index.dist_index(m.i, m.j)]
        d_mat[row, dist] = -1.0
        c_vec[local[index.lam_index(m.i, m.j)]] = 1.0 / m.var
        c_vec[dist] = -2.0 * m.r / m.var
        offset += m.r**2 / m.var
        y_start[dist] = max(m.r, INITIAL_DISTANCE_FLOOR)
        row += 1
    for m in anchored:
        # S_ii - 2 a^T x_i - Xi_ij = -||a||^2
        anchor = anchors[m.j]
        a_mat[row, local[index.s_index(m.i, m.i)]] = 1.0
        for r in range(dim):
            a_mat[row, local[m.i * dim + r]] = -2.0 * anchor[r]
        a_mat[row, local[index.xi_index(m.i, m.j)]] = -1.0
        b_bar[row] = -float(anchor @ anchor)
        dist = local[index.z_index(m.i, m.j)]
        d_mat[row, dist] = -1.0
        c_vec[local[index.xi_index(m.i, m.j)]] = 1.0 / m.var
        c_vec[dist] = -2.0 * m.y / m.var
        offset += m.y**2 / m.var
        y_start[dist] = max(m.y, INITIAL_DISTANCE_FLOOR)
        row += 1

    return AgentSubproblem(
        agent=k,
        clique=clique,
        block_orders=tuple(builder.orders),
        block_keys=tuple(builder.keys),
        var_index=var_index,
        q_mat=q_mat,
        w_mat=w_mat,
        b_vec=b_vec,
        a_mat=a_mat,
        b_bar=b_bar,
        d_mat=d_mat,
        g_vec=np.zeros(n_lin),
        c_vec=c_vec,
        cx_vec=np.zeros(q_mat.shape[1]),
        offset=offset,
        y_start=y_start,
        n_range=len(owned_ranges),
        n_anchor=len(anchored),
    )


def build_subproblems(
    tree: CliqueTree, assignment: Assignment, scn: NetworkScenario
) -> tuple[GlobalVariableIndex, list[AgentSubproblem]]:
    """
    Lower the decomposed relaxation into one standard-form subproblem per agent.

    Args:
        tree: Clique tree of the chordal embedding
        assignment: Measurement ownership per agent
        scn: Scenario with measurements

    Returns:
        Tuple of (global variable index, subproblems in agent order)
    """
    index = build_variable_index(tree, assignment, scn)
    subproblems = [_build_agent(k, tree, assignment, index, scn) for k in range(tree.size)]
    logger.info(
        f"built {len(subproblems)} subproblems over {index.n_y} linear variables",
        extra={"agents": len(subproblems), "n_y": index.n_y},
    )
    return index, subproblems


def expected_counts(clique_size: int, dim: int, n_range: int, n_anchor: int) -> dict[str, int]:
    """Closed-form variable and equality counts of one agent's subproblem."""
    t_order = clique_size + dim
    return {
        "n": svec_dim(clique_size)
        + dim * clique_size
        + 2 * n_range
        + 2 * n_anchor
        + svec_dim(t_order)
        + 3 * n_range
        + 3 * n_anchor,
        "e": svec_dim(t_order) + 4 * n_range + 4 * n_anchor,
    }
