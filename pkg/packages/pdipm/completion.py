"""PSD-completion margin of a partial symmetric matrix.

For a pattern graph P on n vertices and values on its edges and diagonal,

    maximize t  subject to  C - t I PSD,  C_ij = values_ij for ij in P or i = j

with the non-pattern entries of C free. The matrix has a PSD completion
exactly when the optimal t is non-negative.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from packages.graphcore.chordal import Clique
from packages.graphcore.graph import Graph
from packages.pdipm.options import SolverOptions
from packages.pdipm.solver import SolveResult, solve_centralized
from packages.relaxation.subproblem import AgentSubproblem
from packages.sdplinalg.svec import LinalgError, smat, svec, svec_dim

logger = logging.getLogger("treeloc.pdipm.completion")


@dataclass
class CompletionMargin:
    margin: float
    completion: np.ndarray
    free_entries: list[tuple[int, int]]
    result: SolveResult


def completion_subproblem(pattern: Graph, values: np.ndarray) -> tuple[AgentSubproblem, list]:
    """
    Pose the margin problem as a single-block coupled SDP.

    y = (t, free entries in row-major order); x = svec(C - t I) is tied to y by
    x = svec(values on the pattern) - t svec(I) + the free entries.
    """
    n = pattern.n_vertices
    values = np.asarray(values, dtype=float)
    if values.shape != (n, n):
        raise LinalgError(f"values must be {n}x{n}, got {values.shape}")
    if not np.allclose(values, values.T):
        raise LinalgError("values must be symmetric")

    free = [(i, j) for i in range(n) for j in range(i + 1, n) if not pattern.has_edge(i, j)]
    known = np.diag(np.diag(values))
    for i, j in pattern.edges:
        known[i, j] = known[j, i] = values[i, j]

    n_x = svec_dim(n)
    n_y = 1 + len(free)
    w_mat = np.zeros((n_x, n_y))
    w_mat[:, 0] = svec(np.eye(n))
    for col, (i, j) in enumerate(free, start=1):
        unit = np.zeros((n, n))
        unit[i, j] = unit[j, i] = 1.0
        w_mat[:, col] = -svec(unit)
    c_vec = np.zeros(n_y)
    c_vec[0] = -1.0

    sub = AgentSubproblem(
        agent=0,
        clique=tuple(range(n)),
        block_orders=(n,),
        block_keys=(("completion",),),
        var_index=np.arange(n_y),
        q_mat=np.eye(n_x),
        w_mat=w_mat,
        b_vec=svec(known),
        a_mat=np.zeros((0, n_y)),
        b_bar=np.zeros(0),
        d_mat=np.zeros((0, n_y)),
        g_vec=np.zeros(0),
        c_vec=c_vec,
        cx_vec=np.zeros(n_x),
    )
    return sub, free


def solve_completion_margin(
    pattern: Graph, values: np.ndarray, options: Optional[SolverOptions] = None
) -> CompletionMargin:
    """
    Largest t such that some completion C of the partial matrix has C - t I PSD.

    Args:
        pattern: Graph of specified off-diagonal entries
        values: Symmetric n x n array; only the diagonal and pattern entries are read
        options: Solver options for the interior-point solve

    Returns:
        CompletionMargin with the margin and the completion C found

    Raises:
        LinalgError: If values has the wrong shape or is not symmetric
        SolverError: If the interior-point solve fails
    """
    sub, free = completion_subproblem(pattern, values)
    result = solve_centralized([sub], options)
    t = float(result.y[0])
    completion = smat(result.state.agents[0].x) + t * np.eye(pattern.n_vertices)
    if not result.converged:
        logger.warning(f"completion margin solve ended with {result.status}")
    logger.debug(f"completion margin {t:.3e} with {len(free)} free entries")
    return CompletionMargin(margin=t, completion=completion, free_entries=free, result=result)


def clique_margin(cliques: Sequence[Clique], values: np.ndarray) -> float:
    """Smallest eigenvalue over all clique submatrices (inf when there are none)."""
    values = np.asarray(values, dtype=float)
    margin = math.inf
    for clique in cliques:
        members = list(clique.members)
        margin = min(margin, float(np.linalg.eigvalsh(values[np.ix_(members, members)])[0]))
    return margin
