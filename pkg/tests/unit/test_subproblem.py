"""Unit tests for the per-agent standard-form subproblems."""

import json

import numpy as np
import pytest

from packages.relaxation.dump import dump_subproblems
from packages.relaxation.subproblem import INITIAL_DISTANCE_FLOOR, expected_counts
from packages.sdplinalg.svec import svec_dim


def test_expected_counts_small_cases():
    assert expected_counts(1, 2, 0, 1) == {"n": 14, "e": 10}
    assert expected_counts(2, 2, 1, 2)["n"] == 32


def test_chain_root_blocks(chain_problem):
    """Test agent 0: one T block of order 4, one range block, two anchor blocks."""
    sub = chain_problem.subproblems[0]

    assert sub.clique == (0, 1)
    assert sub.block_keys == (("T",), ("range", 0, 1), ("anchor", 0, 0), ("anchor", 1, 0))
    assert sub.block_orders == (4, 2, 2, 2)
    assert sub.n_x == 19
    assert sub.n_j == 13
    assert sub.n_linear == 3
    assert sub.n_inequalities == 3


@pytest.mark.parametrize("agent", range(5))
def test_counts_match_closed_form(chain_problem, agent):
    sub = chain_problem.subproblems[agent]
    counts = expected_counts(len(sub.clique), 2, sub.n_range, sub.n_anchor)

    assert sub.n_local == counts["n"]
    assert sub.n_equalities == counts["e"]


def test_counts_on_random_network(ten_sensor_problem):
    for sub in ten_sensor_problem.subproblems:
        counts = expected_counts(len(sub.clique), 2, sub.n_range, sub.n_anchor)
        assert (sub.n_local, sub.n_equalities) == (counts["n"], counts["e"])


def test_block_slices_partition_x(chain_problem):
    sub = chain_problem.subproblems[1]
    sizes = [s.stop - s.start for s in sub.block_slices]

    assert sizes == [svec_dim(n) for n in sub.block_orders]
    assert sub.block_slices[0].start == 0
    assert sub.block_slices[-1].stop == sub.n_x


def test_coupling_is_identity_in_x(chain_problem):
    """Test Q = I and that every W row references at most one y entry."""
    for sub in chain_problem.subproblems:
        np.testing.assert_array_equal(sub.q_mat, np.eye(sub.n_x))
        assert np.all(np.count_nonzero(sub.w_mat, axis=1) <= 1)


def test_cost_weights(chain_scenario, chain_problem):
    """Test the range cost (Lambda - 2 R D + R^2) / var on agent 0."""
    sub = chain_problem.subproblems[0]
    index = chain_problem.index
    local = {int(g): p for p, g in enumerate(sub.var_index)}
    m = chain_scenario.range_measurements[0]

    assert sub.c_vec[local[index.lam_index(0, 1)]] == pytest.approx(1.0 / m.var)
    assert sub.c_vec[local[index.dist_index(0, 1)]] == pytest.approx(-2.0 * m.r / m.var)
    assert np.all(sub.cx_vec == 0.0)


def test_distance_start_values(chain_problem):
    """Test that D and Z start at the measured value, floored, and everything else at 0."""
    sub = chain_problem.subproblems[0]

    starts = sub.y_start[sub.y_start != 0.0]
    assert len(starts) == 3
    assert np.all(starts >= INITIAL_DISTANCE_FLOOR)


def test_dump_is_json_serializable(chain_problem):
    dump = dump_subproblems(chain_problem.index, chain_problem.subproblems)

    assert dump["index_base"] == 0
    assert dump["n_y"] == 45
    assert len(dump["agents"]) == 5
    assert dump["agents"][0]["blocks"][1] == {"key": ["range", 0, 1], "order": 2}
    assert json.loads(json.dumps(dump)) == dump


def test_one_based_dump_shifts_ids_only(chain_problem):
    """Test that a 1-based dump renumbers agents and sensors but keeps y offsets."""
    zero = dump_subproblems(chain_problem.index, chain_problem.subproblems)
    one = dump_subproblems(chain_problem.index, chain_problem.subproblems, index_base=1)

    assert one["index_base"] == 1
    assert [a["agent"] for a in one["agents"]] == [1, 2, 3, 4, 5]
    assert one["agents"][0]["blocks"][0] == {"key": ["T"], "order": 4}
    assert one["agents"][0]["blocks"][1] == {"key": ["range", 1, 2], "order": 2}
    for a0, a1 in zip(zero["agents"], one["agents"]):
        assert a1["clique"] == [v + 1 for v in a0["clique"]]
        assert a1["var_index"] == a0["var_index"]
