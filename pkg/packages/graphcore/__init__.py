"""Measurement graphs, chordal embeddings and clique trees."""

from packages.graphcore.chordal import (
    ChordalEmbedding,
    Clique,
    chordal_embed,
    enumerate_cliques,
    is_chordal,
    is_perfect_elimination_ordering,
)
from packages.graphcore.clique_tree import (
    CliqueTree,
    build_clique_tree,
    post_order,
    pre_order,
    tree_height,
    verify_cip,
)
from packages.graphcore.graph import (
    Graph,
    GraphError,
    build_measurement_graph,
    connected_components,
    graph_from_json,
    graph_to_json,
    is_connected,
)

__all__ = [
    "ChordalEmbedding",
    "Clique",
    "CliqueTree",
    "Graph",
    "GraphError",
    "build_clique_tree",
    "build_measurement_graph",
    "chordal_embed",
    "connected_components",
    "enumerate_cliques",
    "graph_from_json",
    "graph_to_json",
    "is_chordal",
    "is_connected",
    "is_perfect_elimination_ordering",
    "post_order",
    "pre_order",
    "tree_height",
    "verify_cip",
]
