"""Unit tests for measurement graphs."""

import pytest

from packages.graphcore.graph import (
    Graph,
    GraphError,
    build_measurement_graph,
    connected_components,
    graph_from_json,
    graph_to_json,
    is_connected,
)


def test_close_sensors_are_connected():
    """Test that sensors 0.1 apart with r_c = 0.2 share an edge."""
    graph, _ = build_measurement_graph([(0.0, 0.0), (0.1, 0.0)], [], 0.2)

    assert graph.has_edge(0, 1)


def test_distant_sensors_are_not_connected():
    """Test that sensors 0.3 apart with r_c = 0.2 do not share an edge."""
    graph, _ = build_measurement_graph([(0.0, 0.0), (0.3, 0.0)], [], 0.2)

    assert graph.edges == frozenset()


def test_range_is_strict():
    """Test that a distance exactly equal to r_c is out of range."""
    graph, anchors = build_measurement_graph([(0.0, 0.0), (0.5, 0.0)], [(0.0, 0.5)], 0.5)

    assert not graph.has_edge(0, 1)
    assert anchors == [[], []]


def test_anchor_adjacency_sorted():
    """Test that each sensor lists the anchors in range in ascending id."""
    _, anchors = build_measurement_graph(
        [(0.0, 0.0), (1.0, 1.0)], [(0.9, 1.0), (0.1, 0.0), (0.0, 0.1)], 0.2
    )

    assert anchors == [[1, 2], [0]]


def test_nonpositive_range_rejected():
    with pytest.raises(GraphError):
        build_measurement_graph([(0.0, 0.0)], [], 0.0)


def test_non_finite_positions_rejected():
    with pytest.raises(GraphError):
        build_measurement_graph([(0.0, float("nan"))], [], 0.2)


def test_edges_are_normalized():
    """Test that (j, i) is stored as (i, j)."""
    assert Graph(3, frozenset({(2, 0)})).edges == frozenset({(0, 2)})


def test_self_loop_rejected():
    with pytest.raises(GraphError):
        Graph(2, frozenset({(1, 1)}))


def test_edge_out_of_range_rejected():
    with pytest.raises(GraphError):
        Graph(2, frozenset({(0, 2)}))


def test_components_ordered_by_smallest_member():
    g = Graph(5, frozenset({(3, 4), (0, 2)}))

    assert connected_components(g) == [[0, 2], [1], [3, 4]]
    assert not is_connected(g)


def test_path_is_connected(path4):
    assert is_connected(path4)


def test_json_round_trip(cycle4):
    """Test the edge-list JSON form."""
    obj = graph_to_json(cycle4)

    assert obj == {"n_vertices": 4, "edges": [[0, 1], [0, 3], [1, 2], [2, 3]]}
    assert graph_from_json(obj) == cycle4


def test_malformed_json_rejected():
    with pytest.raises(GraphError):
        graph_from_json({"edges": [[0, 1]]})
