"""Unit tests for the reduced KKT system, search directions and step sizes."""

import dataclasses
import math

import numpy as np
import pytest

from packages.graphcore.graph import Graph
from packages.pdipm.completion import completion_subproblem
from packages.pdipm.errors import KKTSingularError
from packages.pdipm.kkt import (
    assemble_reduced_system,
    linearized_residual,
    reduced_blocks,
    solve_kkt_centralized,
)
from packages.pdipm.residuals import compute_residuals
from packages.pdipm.state import initial_iterate, is_strictly_interior
from packages.pdipm.steps import apply_step, fraction_to_boundary, step_sizes


@pytest.fixture
def chain_start(chain_problem):
    subs = chain_problem.subproblems
    state = initial_iterate(subs)
    return subs, state, compute_residuals(state, subs)


def test_direction_solves_linearized_system(chain_start):
    """Test that substituting the direction back leaves only round-off."""
    subs, state, residuals = chain_start
    direction = solve_kkt_centralized(state, residuals, subs)

    assert linearized_residual(state, residuals, direction, subs) < 1e-9


def test_direction_shapes(chain_start):
    subs, state, residuals = chain_start
    direction = solve_kkt_centralized(state, residuals, subs)

    assert direction.dy.shape == state.y.shape
    for sub, d in zip(subs, direction.agents):
        assert d.dx.shape == d.dz.shape == (sub.n_x,)
        assert d.dv.shape == (sub.n_coupling,)
        assert d.dv_bar.shape == (sub.n_linear,)
        assert d.dlam.shape == (sub.n_inequalities,)


def test_agent_hessian_is_positive_semidefinite(chain_start):
    """Test that each agent's reduced Hessian is symmetric PSD."""
    subs, state, residuals = chain_start

    for sub, it, res in zip(subs, state.agents, residuals.agents):
        qp = reduced_blocks(sub, it, state.y[sub.var_index], res)
        np.testing.assert_array_equal(qp.hessian, qp.hessian.T)
        assert np.linalg.eigvalsh(qp.hessian).min() >= -1e-12
        assert qp.eq_mat.shape == (sub.n_equalities, sub.n_local)


def test_reduced_system_sizes(chain_start, chain_problem):
    subs, state, residuals = chain_start
    system = assemble_reduced_system(state, residuals, subs)
    n_w = chain_problem.index.n_y + sum(sub.n_x for sub in subs)

    assert system.hessian.shape == (n_w, n_w)
    assert system.eq_mat.shape == (sum(sub.n_equalities for sub in subs), n_w)
    assert system.x_offsets[0] == chain_problem.index.n_y


def test_unconstrained_variable_is_singular():
    """Test that a y entry touching no constraint and no cost makes the KKT singular."""
    sub, free = completion_subproblem(
        Graph(3, frozenset({(0, 1), (1, 2)})), np.array([[2, 0.5, 0], [0.5, 2, 0.7], [0, 0.7, 2]])
    )
    assert free == [(0, 2)]
    w_mat = sub.w_mat.copy()
    w_mat[:, 1] = 0.0
    sub = dataclasses.replace(sub, w_mat=w_mat)
    state = initial_iterate([sub])

    with pytest.raises(KKTSingularError, match="KKT singular"):
        solve_kkt_centralized(state, compute_residuals(state, [sub]), [sub])


def test_fraction_to_boundary():
    assert fraction_to_boundary(2.0, 0.95) == 1.0
    assert fraction_to_boundary(0.5, 0.95) == pytest.approx(0.475)
    assert fraction_to_boundary(math.inf, 0.95) == 1.0


def test_step_keeps_iterate_interior(chain_start):
    """Test that fraction-to-boundary steps stay strictly inside the cones."""
    subs, state, residuals = chain_start
    direction = solve_kkt_centralized(state, residuals, subs)
    t_p, t_d = step_sizes(state, direction, subs, gamma=0.95)
    stepped = apply_step(state, direction, t_p, t_d)

    assert 0.0 < t_p <= 1.0
    assert 0.0 < t_d <= 1.0
    assert is_strictly_interior(stepped, subs)
    np.testing.assert_allclose(stepped.y, state.y + t_p * direction.dy)
    np.testing.assert_allclose(
        stepped.agents[0].z, state.agents[0].z + t_d * direction.agents[0].dz
    )
