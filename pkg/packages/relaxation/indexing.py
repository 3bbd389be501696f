"""Global index of the linear variables y shared by all agents.

Layout of y, in order: sensor positions (d entries per sensor), the entries
S_ij (i <= j) of the sparsity pattern sorted by (i, j), one (Lambda_ij, D_ij)
pair per range measurement, one (Xi_ij, Z_ij) pair per anchor measurement.
"""

from dataclasses import dataclass

import numpy as np

from packages.graphcore.clique_tree import CliqueTree
from packages.relaxation.assignment import Assignment, RelaxationError
from packages.scenario.models import NetworkScenario


@dataclass(frozen=True)
class GlobalVariableIndex:
    dim: int
    n_sensors: int
    s_entries: dict[tuple[int, int], int]
    range_entries: dict[tuple[int, int], tuple[int, int]]
    anchor_entries: dict[tuple[int, int], tuple[int, int]]
    agent_indices: tuple[np.ndarray, ...]
    n_y: int

    def x_indices(self, i: int) -> np.ndarray:
        return np.arange(i * self.dim, (i + 1) * self.dim)

    def s_index(self, i: int, j: int) -> int:
        return self.s_entries[(min(i, j), max(i, j))]

    def lam_index(self, i: int, j: int) -> int:
        return self.range_entries[(i, j)][0]

    def dist_index(self, i: int, j: int) -> int:
        return self.range_entries[(i, j)][1]

    def xi_index(self, i: int, j: int) -> int:
        return self.anchor_entries[(i, j)][0]

    def z_index(self, i: int, j: int) -> int:
        return self.anchor_entries[(i, j)][1]


def build_variable_index(
    tree: CliqueTree, assignment: Assignment, scn: NetworkScenario
) -> GlobalVariableIndex:
    """
    Lay out y and compute each agent's index set J_k.

    J_k holds vectri(S_CkCk), the positions of the sensors in C_k, the
    (Lambda, D) pairs of phi_k and the (Xi, Z) pairs of the anchor
    measurements of phi_bar_k, sorted by global index.

    Raises:
        RelaxationError: If the cliques do not cover every sensor
    """
    dim = scn.dim
    n = scn.n_sensors
    covered = tree.vertices()
    if covered != set(range(n)):
        raise RelaxationError(f"sensors {sorted(set(range(n)) - covered)} are in no clique")

    pattern = {(i, i) for i in range(n)}
    for clique in tree.cliques:
        members = clique.members
        for a, i in enumerate(members):
            for j in members[a:]:
                pattern.add((i, j))

    offset = n * dim
    s_entries = {}
    for pair in sorted(pattern):
        s_entries[pair] = offset
        offset += 1
    range_entries = {}
    for m in sorted(scn.range_measurements, key=lambda m: (m.i, m.j)):
        range_entries[(m.i, m.j)] = (offset, offset + 1)
        offset += 2
    anchor_entries = {}
    for m in sorted(scn.anchor_measurements, key=lambda m: (m.i, m.j)):
        anchor_entries[(m.i, m.j)] = (offset, offset + 1)
        offset += 2

    agent_indices = []
    for k, clique in enumerate(tree.cliques):
        members = clique.members
        idx = [i * dim + r for i in members for r in range(dim)]
        idx += [s_entries[(i, j)] for a, i in enumerate(members) for j in members[a:]]
        for pair in assignment.phi[k]:
            idx += list(range_entries[pair])
        for (i, j), slots in anchor_entries.items():
            if i in assignment.phi_bar[k]:
                idx += list(slots)
        agent_indices.append(np.array(sorted(idx), dtype=int))

    return GlobalVariableIndex(
        dim=dim,
        n_sensors=n,
        s_entries=s_entries,
        range_entries=range_entries,
        anchor_entries=anchor_entries,
        agent_indices=tuple(agent_indices),
        n_y=offset,
    )
