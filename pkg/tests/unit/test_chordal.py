"""Unit tests for chordality, chordal embedding and clique enumeration."""

import itertools

import pytest

from packages.graphcore.chordal import (
    ChordalEmbedding,
    Clique,
    chordal_embed,
    enumerate_cliques,
    is_chordal,
    is_perfect_elimination_ordering,
)
from packages.graphcore.graph import Graph, GraphError


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset(itertools.combinations(range(n), 2)))


def test_four_cycle_is_not_chordal(cycle4):
    assert is_chordal(cycle4) == (False, None)


def test_complete_graph_is_chordal():
    chordal, peo = is_chordal(complete_graph(4))

    assert chordal
    assert sorted(peo) == [0, 1, 2, 3]


def test_four_cycle_with_chord_is_chordal(cycle4):
    """Test that adding (0, 2) splits the 4-cycle into triangles."""
    chordal, peo = is_chordal(cycle4.with_edges(frozenset({(0, 2)})))

    assert chordal
    assert is_perfect_elimination_ordering(cycle4.with_edges(frozenset({(0, 2)})), peo)


def test_peo_rejects_bad_orderings(cycle4):
    assert not is_perfect_elimination_ordering(cycle4, (0, 1, 2, 3))
    assert not is_perfect_elimination_ordering(cycle4, (0, 1, 2))


def test_path_needs_no_fill(path4):
    embedding = chordal_embed(path4)

    assert embedding.fill_edges == frozenset()
    assert is_perfect_elimination_ordering(embedding.graph, embedding.peo)


def test_four_cycle_gets_one_fill_edge(cycle4):
    """Test min-degree elimination: vertex 0 goes first, joining 1 and 3."""
    embedding = chordal_embed(cycle4)

    assert embedding.fill_edges == frozenset({(1, 3)})
    assert not embedding.fill_edges & cycle4.edges
    assert is_chordal(embedding.graph)[0]


def test_embedding_is_deterministic(cycle4):
    assert chordal_embed(cycle4) == chordal_embed(cycle4)


def test_disconnected_graph_rejected():
    with pytest.raises(GraphError, match="graph not connected"):
        chordal_embed(Graph(4, frozenset({(0, 1), (2, 3)})))


def test_path_cliques():
    """Test that path 0-1-2 has cliques {0,1} and {1,2}."""
    embedding = chordal_embed(Graph(3, frozenset({(0, 1), (1, 2)})))

    assert enumerate_cliques(embedding) == [Clique((0, 1)), Clique((1, 2))]


def test_complete_graph_has_one_clique():
    embedding = chordal_embed(complete_graph(4))

    assert enumerate_cliques(embedding) == [Clique((0, 1, 2, 3))]


def test_four_cycle_cliques(cycle4):
    embedding = chordal_embed(cycle4)

    assert enumerate_cliques(embedding) == [Clique((0, 1, 3)), Clique((1, 2, 3))]


def test_invalid_peo_rejected(cycle4):
    with pytest.raises(GraphError, match="invalid perfect elimination ordering"):
        enumerate_cliques(ChordalEmbedding(cycle4, frozenset(), (0, 1, 2, 3)))


def test_clique_members_are_sorted_and_unique():
    clique = Clique((3, 1, 3, 2))

    assert clique.members == (1, 2, 3)
    assert len(clique) == 3
    assert 2 in clique
