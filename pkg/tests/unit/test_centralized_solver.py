"""Unit tests for the centralized interior-point solver and its options."""

import dataclasses

import numpy as np
import pytest

from packages.pdipm.options import SolverOptions, validate_solver_options
from packages.pdipm.solver import (
    STATUS_CONVERGED,
    STATUS_MAX_ITERATIONS,
    is_converged,
    solve_centralized,
)
from packages.pdipm.state import is_strictly_interior
from packages.relaxation.lifting import extract_positions
from packages.scenario.validation import ValidationError


def test_default_options_are_valid():
    assert validate_solver_options(SolverOptions()) == {}


def test_invalid_options_collected():
    options = SolverOptions(eps_feas=0.0, eps_gap=-1.0, max_iters=0, gamma=1.0, sigma_c=0.0)

    with pytest.raises(ValidationError) as exc_info:
        validate_solver_options(options)

    assert set(exc_info.value.errors) == {"eps_feas", "eps_gap", "max_iters", "gamma", "sigma_c"}


def test_is_converged_needs_both_tests():
    options = SolverOptions()

    assert is_converged(1e-9, 1e-9, options)
    assert not is_converged(1e-9, 1e-7, options)
    assert not is_converged(1e-7, 1e-9, options)


def test_zero_noise_chain_converges(chain_problem):
    """Test that the noiseless relaxation is solved to zero cost."""
    result = solve_centralized(chain_problem.subproblems, n_y=chain_problem.index.n_y)

    assert result.status == STATUS_CONVERGED
    assert result.converged
    assert result.objective == pytest.approx(0.0, abs=1e-6)
    assert result.mu <= 1e-8
    assert result.scaled_residual <= 1e-8
    assert is_strictly_interior(result.state, chain_problem.subproblems)


def test_trace_has_a_row_per_iteration(chain_problem):
    result = solve_centralized(chain_problem.subproblems)

    assert len(result.trace) == result.iterations + 1
    assert [row.iteration for row in result.trace] == list(range(result.iterations + 1))
    assert result.trace[-1].mu == pytest.approx(result.mu)
    assert all(0.0 < row.t_p <= 1.0 for row in result.trace[1:])


@pytest.mark.slow
def test_noisy_network_converges(ten_sensor_problem):
    """Test a ten-sensor network with sigma = 0.01 converges in a few dozen iterations."""
    problem = ten_sensor_problem
    result = solve_centralized(problem.subproblems, n_y=problem.index.n_y)
    positions = extract_positions(problem.index, result.y)

    assert result.converged
    assert result.iterations <= 50
    assert positions.shape == (10, 2)
    assert np.all(np.isfinite(positions))


def test_iteration_limit(chain_problem):
    result = solve_centralized(chain_problem.subproblems, SolverOptions(max_iters=1))

    assert result.status == STATUS_MAX_ITERATIONS
    assert result.iterations == 1
    assert not result.converged


def test_direction_check_is_quiet_on_good_directions(chain_problem, caplog):
    """Test that checked directions produce no warning on a well-posed problem."""
    options = dataclasses.replace(SolverOptions(), check_directions=True, max_iters=3)

    with caplog.at_level("WARNING", logger="treeloc.pdipm.solver"):
        solve_centralized(chain_problem.subproblems, options)

    assert not [r for r in caplog.records if "misses the linearized system" in r.getMessage()]


def test_invalid_options_rejected_before_solving(chain_problem):
    with pytest.raises(ValidationError):
        solve_centralized(chain_problem.subproblems, SolverOptions(gamma=1.5))
