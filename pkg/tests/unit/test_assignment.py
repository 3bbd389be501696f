"""Unit tests for measurement assignment and the global variable index."""

import numpy as np
import pytest

from packages.graphcore.chordal import Clique
from packages.graphcore.clique_tree import build_clique_tree
from packages.relaxation.assignment import RelaxationError, assign_measurements
from packages.relaxation.indexing import build_variable_index


def test_chain_assignment(chain_problem):
    """Test that each pair goes to the only clique holding it and anchors to the first."""
    assignment = chain_problem.assignment

    assert assignment.phi == tuple(frozenset({(k, k + 1)}) for k in range(5))
    assert assignment.phi_bar == (
        frozenset({0, 1}),
        frozenset({2}),
        frozenset({3}),
        frozenset({4}),
        frozenset({5}),
    )


def test_owner_lookup(chain_problem):
    assignment = chain_problem.assignment

    assert assignment.owner_of_range(2, 1) == 1
    assert assignment.owner_of_sensor(1) == 0
    assert assignment.owner_of_sensor(5) == 4
    with pytest.raises(KeyError):
        assignment.owner_of_range(0, 5)


def test_every_measurement_owned_once(ten_sensor_problem):
    """Test that the phi sets partition the edges and phi_bar the anchored sensors."""
    scn = ten_sensor_problem.scenario
    assignment = ten_sensor_problem.assignment
    pairs = [pair for owned in assignment.phi for pair in owned]
    sensors = [i for owned in assignment.phi_bar for i in owned]

    assert sorted(pairs) == sorted((m.i, m.j) for m in scn.range_measurements)
    assert sorted(sensors) == sorted({m.i for m in scn.anchor_measurements})
    for k, owned in enumerate(assignment.phi):
        members = ten_sensor_problem.tree.cliques[k].as_set()
        assert all(i in members and j in members for i, j in owned)


def test_uncovered_measurement_rejected(chain_scenario):
    """Test that a tree missing sensor 5 cannot hold the pair (4, 5)."""
    tree = build_clique_tree([Clique((k, k + 1)) for k in range(4)])

    with pytest.raises(RelaxationError, match="not covered"):
        assign_measurements(tree, chain_scenario)


def test_chain_index_layout(chain_problem):
    """Test positions first, then the pattern of S, then measurement pairs."""
    index = chain_problem.index

    np.testing.assert_array_equal(index.x_indices(2), [4, 5])
    assert index.s_index(0, 0) == 12
    assert index.s_index(1, 0) == index.s_index(0, 1) == 13
    assert len(index.s_entries) == 11
    assert index.range_entries[(0, 1)] == (23, 24)
    assert index.anchor_entries[(0, 0)] == (33, 34)
    assert index.n_y == 45


def test_agent_indices_cover_y(ten_sensor_problem):
    """Test that the index sets are sorted, unique and together cover every entry of y."""
    index = ten_sensor_problem.index
    covered = set()

    for idx in index.agent_indices:
        assert np.all(np.diff(idx) > 0)
        covered.update(int(g) for g in idx)

    assert covered == set(range(index.n_y))


def test_line_index_is_single_agent(line_problem):
    index = line_problem.index

    assert len(index.agent_indices) == 1
    assert index.n_y == 13
    np.testing.assert_array_equal(index.agent_indices[0], np.arange(13))


def test_uncovered_sensor_rejected(chain_scenario, chain_problem):
    tree = build_clique_tree([Clique((k, k + 1)) for k in range(4)])

    with pytest.raises(RelaxationError, match="in no clique"):
        build_variable_index(tree, chain_problem.assignment, chain_scenario)
