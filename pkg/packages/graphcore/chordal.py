"""Chordality testing, minimum-degree chordal embedding and maximal clique enumeration."""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import networkx as nx

from packages.graphcore.graph import Graph, GraphError

logger = logging.getLogger("treeloc.graphcore.chordal")


@dataclass(frozen=True)
class ChordalEmbedding:
    """A graph together with the fill edges that make it chordal and a PEO of the result."""

    base: Graph
    fill_edges: frozenset[tuple[int, int]]
    peo: tuple[int, ...]

    @property
    def graph(self) -> Graph:
        return self.base.with_edges(self.fill_edges)


@dataclass(frozen=True)
class Clique:
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, v: object) -> bool:
        return v in self.members

    def as_set(self) -> frozenset[int]:
        return frozenset(self.members)


def _maximum_cardinality_search(adj: list[set[int]]) -> list[int]:
    """Visit order of MCS; ties go to the lowest vertex id."""
    n = len(adj)
    weight = [0] * n
    visited = [False] * n
    order: list[int] = []
    for _ in range(n):
        best = -1
        for v in range(n):
            if not visited[v] and (best < 0 or weight[v] > weight[best]):
                best = v
        visited[best] = True
        order.append(best)
        for u in adj[best]:
            if not visited[u]:
                weight[u] += 1
    return order


def is_perfect_elimination_ordering(g: Graph, order: Sequence[int]) -> bool:
    """
    Check that each vertex's later neighbors form a clique.

    Uses the parent test: for every vertex v with later neighbors, the earliest
    of them must be adjacent to all the others.
    """
    if sorted(order) != list(range(g.n_vertices)):
        return False
    adj = g.adjacency()
    position = {v: k for k, v in enumerate(order)}
    for v in order:
        later = [u for u in adj[v] if position[u] > position[v]]
        if not later:
            continue
        parent = min(later, key=position.__getitem__)
        if any(u != parent and u not in adj[parent] for u in later):
            return False
    return True


def is_chordal(g: Graph) -> tuple[bool, Optional[tuple[int, ...]]]:
    """
    Test chordality by maximum cardinality search.

    Returns:
        (True, peo) when every cycle of length >= 4 has a chord, else (False, None).
        The PEO is the reverse of the search's visit order.
    """
    order = _maximum_cardinality_search(g.adjacency())
    peo = tuple(reversed(order))
    if is_perfect_elimination_ordering(g, peo):
        return True, peo
    return False, None


def chordal_embed(g: Graph) -> ChordalEmbedding:
    """
    Make a connected graph chordal by greedy minimum-degree elimination.

    The vertex of smallest degree in the current elimination graph is removed
    (ties to the lowest id) after its remaining neighbors are joined pairwise.
    The elimination order is a PEO of the filled graph.

    Raises:
        GraphError: If the graph is empty or not connected
    """
    if g.n_vertices == 0 or not nx.is_connected(g.to_networkx()):
        raise GraphError("graph not connected")

    adj = g.adjacency()
    remaining = set(range(g.n_vertices))
    fill: set[tuple[int, int]] = set()
    order: list[int] = []
    while remaining:
        v = min(remaining, key=lambda u: (len(adj[u]), u))
        neighbors = sorted(adj[v])
        for a_pos, a in enumerate(neighbors):
            for b in neighbors[a_pos + 1 :]:
                if b not in adj[a]:
                    adj[a].add(b)
                    adj[b].add(a)
                    fill.add((a, b))
        for u in neighbors:
            adj[u].discard(v)
        remaining.remove(v)
        order.append(v)

    embedding = ChordalEmbedding(base=g, fill_edges=frozenset(fill), peo=tuple(order))
    logger.info(
        f"chordal embedding added {len(fill)} fill edges to {len(g.edges)} edges",
        extra={"fill_edges": len(fill), "n_vertices": g.n_vertices},
    )
    return embedding


def enumerate_cliques(e: ChordalEmbedding) -> list[Clique]:
    """
    Maximal cliques of a chordal graph read off its PEO.

    Every maximal clique is {v} plus the later neighbors of some v; candidates
    contained in another candidate are dropped. Cliques are sorted by members.

    Raises:
        GraphError: If e.peo is not a perfect elimination ordering of e.graph
    """
    graph = e.graph
    if not is_perfect_elimination_ordering(graph, e.peo):
        raise GraphError("invalid perfect elimination ordering")
    adj = graph.adjacency()
    position = {v: k for k, v in enumerate(e.peo)}
    candidates = {
        frozenset({v} | {u for u in adj[v] if position[u] > position[v]}) for v in e.peo
    }
    maximal = [c for c in candidates if not any(c < other for other in candidates)]
    return sorted((Clique(tuple(c)) for c in maximal), key=lambda c: c.members)
