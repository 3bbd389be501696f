"""Unit tests for the distributed interior-point solver."""

import dataclasses

import numpy as np
import pytest

from packages.msgpass.agents import build_agent_tree
from packages.msgpass.bus import MessageBus
from packages.msgpass.commlog import PASS_DIRECTION, PASS_PERTURBATION, PASS_STEP, CommLog
from packages.msgpass.messages import local_qp_blocks, solve_direction_distributed
from packages.msgpass.solver import solve_distributed
from packages.pdipm.kkt import solve_kkt_centralized
from packages.pdipm.options import SolverOptions
from packages.pdipm.residuals import compute_residuals
from packages.pdipm.solver import STATUS_MAX_ITERATIONS, solve_centralized
from packages.pdipm.state import initial_iterate


def solve_both(problem, options=None):
    central = solve_centralized(problem.subproblems, options, n_y=problem.index.n_y)
    distributed, log = solve_distributed(
        problem.tree, problem.index, problem.subproblems, options
    )
    return central, distributed, log


def test_first_direction_matches_centralized(chain_problem):
    """Test that message passing reproduces the dense direction at the starting point."""
    subs = chain_problem.subproblems
    agents = build_agent_tree(chain_problem.tree, chain_problem.index, subs)
    state = initial_iterate(subs, chain_problem.index.n_y)
    residuals = compute_residuals(state, subs)
    central = solve_kkt_centralized(state, residuals, subs)
    qps = {
        a.agent: local_qp_blocks(a, it, state.y[a.var_index], res)
        for a, it, res in zip(agents, state.agents, residuals.agents)
    }

    solutions = solve_direction_distributed(agents, qps, MessageBus(CommLog.for_agents(agents)))

    scale = 1.0 + np.abs(central.dy).max()
    for a, d in zip(agents, central.agents):
        w, _ = solutions[a.agent]
        assert np.abs(w[: a.n_j] - central.dy[a.var_index]).max() / scale <= 1e-8
        assert np.abs(w[a.n_j :] - d.dx).max() / (1.0 + np.abs(d.dx).max()) <= 1e-8


def test_chain_matches_centralized(chain_problem):
    """Test that both solvers agree on iterations, objective and the solution y."""
    central, distributed, _ = solve_both(chain_problem)

    assert distributed.converged
    assert abs(distributed.iterations - central.iterations) <= 1
    assert distributed.objective == pytest.approx(central.objective, abs=1e-6)
    if distributed.iterations == central.iterations:
        error = np.abs(distributed.y - central.y).max() / (1.0 + np.abs(central.y).max())
        assert error <= 1e-5


def test_six_communications_per_iteration(chain_problem):
    """Test that every non-root agent communicates exactly 6 times per iteration."""
    result, log = solve_distributed(
        chain_problem.tree, chain_problem.index, chain_problem.subproblems
    )
    summary = log.summary()

    assert set(log.per_agent_communications().values()) == {6 * result.iterations}
    assert summary["per_agent_communications"] == 6 * result.iterations
    assert summary["sequential_steps"] == 2 * 4 * 3 * result.iterations
    assert summary["factorizations"] == 5 * result.iterations
    assert log.iterations == result.iterations


def test_message_sizes(chain_problem):
    """Test the logged scalars of every upward message against the separator sizes."""
    _, log = solve_distributed(
        chain_problem.tree,
        chain_problem.index,
        chain_problem.subproblems,
        SolverOptions(max_iters=2),
    )
    agents = build_agent_tree(
        chain_problem.tree, chain_problem.index, chain_problem.subproblems
    )
    expected_up = {
        PASS_DIRECTION: lambda a: a.message_payload,
        PASS_STEP: lambda a: 2,
        PASS_PERTURBATION: lambda a: 7 + a.s_k,
    }

    up_records = [r for r in log.records if r.sweep == "up" and r.pass_name in expected_up]
    assert up_records
    for record in up_records:
        agent = agents[record.agent]
        if agent.is_root:
            assert record.msgs_sent == 0
        else:
            assert record.msgs_sent == 1
            assert record.scalars_sent == expected_up[record.pass_name](agent)


def test_single_clique_sends_nothing(line_problem):
    result, log = solve_distributed(
        line_problem.tree, line_problem.index, line_problem.subproblems
    )

    assert result.converged
    assert log.total_messages() == 0
    assert log.summary()["per_agent_communications"] == 0
    assert log.summary()["sequential_steps"] == 0


def test_iteration_limit(chain_problem):
    result, log = solve_distributed(
        chain_problem.tree,
        chain_problem.index,
        chain_problem.subproblems,
        SolverOptions(max_iters=1),
    )

    assert result.status == STATUS_MAX_ITERATIONS
    assert result.iterations == 1
    assert log.passes() == 3


def test_checked_directions_stay_quiet(chain_problem, caplog):
    options = dataclasses.replace(SolverOptions(), check_directions=True, max_iters=3)

    with caplog.at_level("WARNING", logger="treeloc.msgpass.solver"):
        solve_distributed(
            chain_problem.tree, chain_problem.index, chain_problem.subproblems, options
        )

    assert not [r for r in caplog.records if "misses the linearized system" in r.getMessage()]


@pytest.mark.slow
def test_random_network_matches_centralized(ten_sensor_problem):
    central, distributed, log = solve_both(ten_sensor_problem)

    assert central.converged and distributed.converged
    assert abs(distributed.iterations - central.iterations) <= 1
    assert distributed.objective == pytest.approx(central.objective, rel=1e-5, abs=1e-6)
    assert log.summary()["per_agent_communications"] in (0, 6 * distributed.iterations)
