"""Undirected measurement graphs and their JSON edge-list form."""

import logging
from dataclasses import dataclass, field
from typing import Any, Sequence

import networkx as nx
import numpy as np
from scipy.spatial.distance import cdist

logger = logging.getLogger("treeloc.graphcore.graph")


class GraphError(Exception):
    """Raised for invalid graphs, orderings and clique trees."""


def _edge(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n_vertices-1; edges stored as (i, j) with i < j."""

    n_vertices: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n_vertices < 0:
            raise GraphError(f"n_vertices must be non-negative, got {self.n_vertices}")
        normalized = set()
        for i, j in self.edges:
            i, j = int(i), int(j)
            if i == j:
                raise GraphError(f"self-loop at vertex {i}")
            if not (0 <= i < self.n_vertices and 0 <= j < self.n_vertices):
                raise GraphError(f"edge ({i}, {j}) outside [0, {self.n_vertices})")
            normalized.add(_edge(i, j))
        object.__setattr__(self, "edges", frozenset(normalized))

    def adjacency(self) -> list[set[int]]:
        """Neighbor sets indexed by vertex."""
        adj: list[set[int]] = [set() for _ in range(self.n_vertices)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def has_edge(self, i: int, j: int) -> bool:
        return _edge(i, j) in self.edges

    def with_edges(self, extra: frozenset[tuple[int, int]]) -> "Graph":
        return Graph(self.n_vertices, self.edges | extra)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n_vertices))
        g.add_edges_from(self.edges)
        return g


def build_measurement_graph(
    sensor_positions: Sequence[Sequence[float]],
    anchor_positions: Sequence[Sequence[float]],
    r_c: float,
) -> tuple[Graph, list[list[int]]]:
    """
    Build the inter-sensor measurement graph and per-sensor anchor lists.

    Two nodes measure each other when their Euclidean distance is strictly
    less than the communication range.

    Args:
        sensor_positions: N points of dimension d
        anchor_positions: m points of dimension d
        r_c: Communication range

    Returns:
        Tuple of (graph over sensors, sorted anchor ids per sensor)

    Raises:
        GraphError: If r_c is not positive or positions are not finite
    """
    if not r_c > 0:
        raise GraphError(f"communication range must be positive, got {r_c}")
    sensors = np.asarray(sensor_positions, dtype=float)
    anchors = np.asarray(anchor_positions, dtype=float)
    n = len(sensors)
    if n and not np.all(np.isfinite(sensors)):
        raise GraphError("sensor positions must be finite")
    if len(anchors) and not np.all(np.isfinite(anchors)):
        raise GraphError("anchor positions must be finite")

    edges: set[tuple[int, int]] = set()
    if n > 1:
        dist = cdist(sensors, sensors)
        rows, cols = np.nonzero(np.triu(dist < r_c, k=1))
        edges = {(int(i), int(j)) for i, j in zip(rows, cols)}

    anchor_adjacency: list[list[int]] = [[] for _ in range(n)]
    if n and len(anchors):
        reach = cdist(sensors, anchors) < r_c
        anchor_adjacency = [[int(j) for j in np.flatnonzero(row)] for row in reach]

    graph = Graph(n, frozenset(edges))
    logger.debug(f"measurement graph: {n} sensors, {len(edges)} edges, r_c={r_c}")
    return graph, anchor_adjacency


def connected_components(g: Graph) -> list[list[int]]:
    """Connected components as sorted vertex lists, ordered by smallest member."""
    components = [sorted(c) for c in nx.connected_components(g.to_networkx())]
    return sorted(components, key=lambda c: c[0])


def is_connected(g: Graph) -> bool:
    return g.n_vertices > 0 and nx.is_connected(g.to_networkx())


def graph_to_json(g: Graph) -> dict[str, Any]:
    """Serialize to {"n_vertices": n, "edges": [[i, j], ...]} with edges sorted."""
    return {"n_vertices": g.n_vertices, "edges": [list(e) for e in sorted(g.edges)]}


def graph_from_json(obj: dict[str, Any]) -> Graph:
    """
    Parse the JSON edge-list form.

    Raises:
        GraphError: If fields are missing or malformed
    """
    try:
        n = int(obj["n_vertices"])
        edges = frozenset((int(e[0]), int(e[1])) for e in obj["edges"])
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise GraphError(f"malformed graph JSON: {e}") from e
    return Graph(n, edges)
