"""Unit tests for the experiment pipeline."""

import json

import numpy as np
import pytest

from packages.cli import pipeline
from packages.cli.config import ExperimentConfig
from packages.cli.pipeline import (
    STATUS_MESSAGE_ERROR,
    STATUS_NUMERICAL_ERROR,
    STATUS_SOLVER_ERROR,
    converged_all,
    generate_runs,
    run_scenario,
    solve_runs,
)
from packages.msgpass.errors import MessagePassingError
from packages.pdipm.errors import SolverError
from packages.scenario.storage import load_scenario, save_scenario
from packages.sdplinalg.svec import LinalgError


@pytest.fixture
def chain_file(tmp_path, chain_scenario):
    path = tmp_path / "scenario_chain.json"
    save_scenario(chain_scenario, path)
    return path


def fifty_sensor_config(out_dir, runs=3):
    return ExperimentConfig(
        sensors=50, anchors=9, area=(0.8, 0.8), rc=0.2, seed=10, runs=runs, out_dir=out_dir
    )


class TestGenerateRuns:
    def test_runs_have_distinct_seeds_and_networks(self, tmp_path):
        """Test that consecutive runs never collapse onto one seed or one geometry."""
        paths = generate_runs(fifty_sensor_config(tmp_path))
        scenarios = [load_scenario(p) for p in paths]

        assert [s.seed for s in scenarios] == [10, 11, 12]
        positions = {s.true_sensor_positions for s in scenarios}
        assert len(positions) == 3

    def test_generation_is_deterministic(self, tmp_path):
        """Test that the same configuration writes byte-identical scenario files."""
        first = generate_runs(fifty_sensor_config(tmp_path / "a", runs=2))
        second = generate_runs(fifty_sensor_config(tmp_path / "b", runs=2))

        assert [p.name for p in first] == [p.name for p in second]
        for a, b in zip(first, second):
            assert a.read_bytes() == b.read_bytes()

    def test_noise_levels_share_geometry(self, tmp_path):
        config = ExperimentConfig(
            sensors=8, anchors=4, area=(1.0, 1.0), rc=0.6, noise=(0.0, 0.1), out_dir=tmp_path
        )

        exact, noisy = (load_scenario(p) for p in generate_runs(config))

        assert exact.true_sensor_positions == noisy.true_sensor_positions
        assert exact.range_measurements != noisy.range_measurements


class TestRunFailures:
    @pytest.mark.parametrize(
        "error, status",
        [
            (SolverError("step length vanished", iteration=3), STATUS_SOLVER_ERROR),
            (LinalgError("matrix not symmetric"), STATUS_NUMERICAL_ERROR),
            (np.linalg.LinAlgError("Matrix is not positive definite"), STATUS_NUMERICAL_ERROR),
            (MessagePassingError("agent 2 has no parent"), STATUS_MESSAGE_ERROR),
        ],
    )
    def test_failure_is_recorded_on_the_run(self, monkeypatch, tmp_path, chain_file, error, status):
        """Test that a failing solve becomes a run status instead of an exception."""

        def failing_solve(problem, config):
            raise error

        monkeypatch.setattr(pipeline, "solve_problem", failing_solve)
        config = ExperimentConfig(input_paths=(chain_file,), out_dir=tmp_path)

        outcome = run_scenario(chain_file, config)

        assert outcome.status == status
        assert outcome.error == str(error)
        assert outcome.report is None
        row = outcome.row()
        assert row.status == status
        assert row.rmse is None

    def test_sweep_continues_after_numerical_failure(self, monkeypatch, tmp_path, chain_scenario):
        """Test that one run's factorization failure does not stop the next run."""
        first, second = tmp_path / "scenario_a.json", tmp_path / "scenario_b.json"
        save_scenario(chain_scenario, first)
        save_scenario(chain_scenario, second)
        solve = pipeline.solve_problem

        def fail_first(problem, config):
            if not fail_first.called:
                fail_first.called = True
                raise np.linalg.LinAlgError("Singular matrix")
            return solve(problem, config)

        fail_first.called = False
        monkeypatch.setattr(pipeline, "solve_problem", fail_first)
        out = tmp_path / "out"
        config = ExperimentConfig(input_paths=(first, second), out_dir=out)

        outcomes = solve_runs(config)

        assert [o.status for o in outcomes] == [STATUS_NUMERICAL_ERROR, "converged"]
        assert not converged_all(outcomes)
        assert not (out / "estimate_a_distributed.json").exists()
        estimate = json.loads((out / "estimate_b_distributed.json").read_text())
        assert estimate["status"] == "converged"

    def test_unrelated_errors_propagate(self, monkeypatch, tmp_path, chain_file):
        def broken_solve(problem, config):
            raise KeyError("n_y")

        monkeypatch.setattr(pipeline, "solve_problem", broken_solve)
        config = ExperimentConfig(input_paths=(chain_file,), out_dir=tmp_path)

        with pytest.raises(KeyError):
            run_scenario(chain_file, config)
