"""Experiment pipeline: scenario files in, localization results out."""

import json
import logging
import re
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from packages.cli.config import ExperimentConfig, validate_experiment_config
from packages.cli.reports import ResultRow, run_id_for, write_trace
from packages.graphcore.chordal import ChordalEmbedding, Clique, chordal_embed, enumerate_cliques
from packages.graphcore.clique_tree import CliqueTree, build_clique_tree, tree_height
from packages.msgpass.agents import build_agent_tree, complexity_report
from packages.msgpass.commlog import CommLog
from packages.msgpass.errors import MessagePassingError
from packages.msgpass.solver import solve_distributed
from packages.pdipm.errors import SolverError
from packages.pdipm.solver import STATUS_CONVERGED, SolveResult, solve_centralized
from packages.relaxation.assignment import Assignment, assign_measurements
from packages.relaxation.dump import dump_subproblems
from packages.relaxation.indexing import GlobalVariableIndex
from packages.relaxation.lifting import extract_positions
from packages.relaxation.regularization import RegularizationWeights, add_trace_regularization
from packages.relaxation.subproblem import AgentSubproblem, build_subproblems
from packages.scenario.generator import generate_scenario, synthesize_measurements
from packages.scenario.metrics import rmse
from packages.scenario.models import EstimateReport, NetworkScenario, measurement_graph
from packages.scenario.storage import load_scenario, save_scenario
from packages.sdplinalg.svec import LinalgError

logger = logging.getLogger("treeloc.cli.pipeline")

# Vertex, clique and agent ids are 0-based internally and in scenario files,
# 1-based in what the command line prints and in per-run debug files
USER_INDEX_BASE = 1

STATUS_SOLVER_ERROR = "solver-error"
STATUS_NUMERICAL_ERROR = "numerical-error"
STATUS_MESSAGE_ERROR = "message-passing-error"

# Failures recorded on the run instead of aborting the sweep; first match wins
RUN_FAILURE_STATUSES = (
    (SolverError, STATUS_SOLVER_ERROR),
    (LinalgError, STATUS_NUMERICAL_ERROR),
    (np.linalg.LinAlgError, STATUS_NUMERICAL_ERROR),
    (MessagePassingError, STATUS_MESSAGE_ERROR),
)
_SCENARIO_FILE = re.compile(r"^scenario_(?P<run_id>.+)$")


@dataclass
class LocalizationProblem:
    """A scenario lowered to its decomposed relaxation."""

    scenario: NetworkScenario
    embedding: ChordalEmbedding
    cliques: list[Clique]
    tree: CliqueTree
    assignment: Assignment
    index: GlobalVariableIndex
    subproblems: list[AgentSubproblem]


@dataclass
class RunOutcome:
    run_id: str
    solver: str
    status: str
    tree_height: int
    objective: Optional[float]
    report: Optional[EstimateReport]
    result: Optional[SolveResult] = None
    commlog: Optional[CommLog] = None
    error: Optional[str] = None

    def row(self) -> ResultRow:
        report = self.report
        return ResultRow(
            run_id=self.run_id,
            solver=self.solver,
            status=self.status,
            iters=report.iterations if report else 0,
            per_agent_comms=report.per_agent_communications if report else None,
            tree_height=self.tree_height,
            rmse=report.rmse if report else None,
            objective=self.objective,
            wall_time_s=report.wall_time if report else 0.0,
        )


def scenario_filename(run_id: str) -> str:
    return f"scenario_{run_id}.json"


def run_id_of(path: Path) -> str:
    match = _SCENARIO_FILE.match(Path(path).stem)
    return match.group("run_id") if match else Path(path).stem


def generate_runs(config: ExperimentConfig) -> list[Path]:
    """
    Write one scenario file per (noise level, Monte Carlo run).

    Run r uses seed + r for the positions, so every noise level sees the same
    geometry and different runs never share one; noise is drawn from the run
    seed as well.
    """
    validate_experiment_config(config)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for run in range(config.runs):
        base = generate_scenario(
            config.sensors, config.anchors, config.area_sides, config.rc, config.seed + run
        )
        for sigma in config.noise:
            scn = synthesize_measurements(base, sigma, sigma, seed=base.seed)
            path = config.out_dir / scenario_filename(run_id_for(sigma, run))
            save_scenario(scn, path)
            paths.append(path)
    logger.info(f"generated {len(paths)} scenario files in {config.out_dir}")
    return paths


def prepare_problem(
    scn: NetworkScenario,
    root: Optional[int] = None,
    weights: Optional[RegularizationWeights] = None,
) -> LocalizationProblem:
    """Chordal embedding, cliques, clique tree, measurement assignment and subproblems."""
    graph, _ = measurement_graph(scn)
    embedding = chordal_embed(graph)
    cliques = enumerate_cliques(embedding)
    tree = build_clique_tree(cliques, root)
    assignment = assign_measurements(tree, scn)
    index, subproblems = build_subproblems(tree, assignment, scn)
    if weights is not None:
        subproblems = add_trace_regularization(subproblems, weights)
    return LocalizationProblem(scn, embedding, cliques, tree, assignment, index, subproblems)


def solve_problem(
    problem: LocalizationProblem, config: ExperimentConfig
) -> tuple[SolveResult, Optional[CommLog]]:
    if config.solver == "centralized":
        result = solve_centralized(problem.subproblems, config.solver_options, problem.index.n_y)
        return result, None
    return solve_distributed(
        problem.tree, problem.index, problem.subproblems, config.solver_options
    )


def failure_status(error: Exception) -> str:
    for cls, status in RUN_FAILURE_STATUSES:
        if isinstance(error, cls):
            return status
    raise error


def run_scenario(path: Path, config: ExperimentConfig) -> RunOutcome:
    """
    Solve one scenario file and write its per-run outputs.

    Input errors propagate. Solver, numerical and message-passing failures are
    reported in the outcome status (see RUN_FAILURE_STATUSES) so that the rest
    of a sweep still runs.
    """
    run_id = run_id_of(path)
    scn = load_scenario(path)
    problem = prepare_problem(scn, config.root, config.regularization)
    height = tree_height(problem.tree)
    if config.dump_subproblems:
        dump = dump_subproblems(problem.index, problem.subproblems, USER_INDEX_BASE)
        (config.out_dir / f"subproblems_{run_id}.json").write_text(json.dumps(dump, indent=2))

    started = time.perf_counter()
    try:
        result, log = solve_problem(problem, config)
    except tuple(cls for cls, _ in RUN_FAILURE_STATUSES) as e:
        status = failure_status(e)
        iteration = getattr(e, "iteration", None)
        logger.warning(
            f"{run_id}: {config.solver} solver failed ({status}, iteration {iteration}): {e}",
            extra={"run_id": run_id, "status": status},
        )
        return RunOutcome(
            run_id=run_id,
            solver=config.solver,
            status=status,
            tree_height=height,
            objective=None,
            report=None,
            error=str(e),
        )
    wall_time = time.perf_counter() - started

    positions = extract_positions(problem.index, result.y)
    error = rmse(scn.truth_array(), [positions]) if scn.has_truth else None
    comms = log.summary()["per_agent_communications"] if log is not None else None
    report = EstimateReport(
        estimated_positions=positions,
        rmse=error,
        iterations=result.iterations,
        per_agent_communications=comms,
        wall_time=wall_time,
    )
    outcome = RunOutcome(
        run_id=run_id,
        solver=config.solver,
        status=result.status,
        tree_height=height,
        objective=result.objective,
        report=report,
        result=result,
        commlog=log,
    )
    write_run_outputs(outcome, config)
    return outcome


def write_run_outputs(outcome: RunOutcome, config: ExperimentConfig) -> None:
    stem = f"{outcome.run_id}_{outcome.solver}"
    estimate = {
        "run_id": outcome.run_id,
        "solver": outcome.solver,
        "status": outcome.status,
        "iterations": outcome.report.iterations,
        "objective": outcome.objective,
        "rmse": outcome.report.rmse,
        "positions": outcome.report.estimated_positions.tolist(),
    }
    (config.out_dir / f"estimate_{stem}.json").write_text(json.dumps(estimate, indent=2) + "\n")
    if config.trace:
        write_trace(config.out_dir / f"trace_{stem}.csv", outcome.result.trace)
    if config.commlog and outcome.commlog is not None:
        outcome.commlog.write_csv(
            config.out_dir / f"commlog_{outcome.run_id}.csv", index_base=USER_INDEX_BASE
        )


def solve_runs(config: ExperimentConfig) -> list[RunOutcome]:
    validate_experiment_config(config, for_solve=True)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    outcomes = []
    for path in config.input_paths:
        outcome = run_scenario(Path(path), config)
        logger.info(
            f"{outcome.run_id}: {outcome.status}",
            extra={"run_id": outcome.run_id, "status": outcome.status},
        )
        outcomes.append(outcome)
    return outcomes


def _one_based(value: Optional[int]) -> Optional[int]:
    return None if value is None else value + USER_INDEX_BASE


def inspect_problem(problem: LocalizationProblem) -> dict:
    """
    Fill count, cliques, tree height and per-agent sizes of a lowered scenario.

    Clique, agent and sensor ids in the result are 1-based.
    """
    agents = build_agent_tree(problem.tree, problem.index, problem.subproblems)
    report = complexity_report(agents)
    for row in report:
        row["agent"] = _one_based(row["agent"])
        row["parent"] = _one_based(row["parent"])
    return {
        "index_base": USER_INDEX_BASE,
        "n_sensors": problem.scenario.n_sensors,
        "n_range": len(problem.scenario.range_measurements),
        "n_anchor": len(problem.scenario.anchor_measurements),
        "fill_edges": len(problem.embedding.fill_edges),
        "clique_sizes": [len(c) for c in problem.tree.cliques],
        "cliques": [[v + USER_INDEX_BASE for v in c.members] for c in problem.tree.cliques],
        "root": _one_based(problem.tree.root),
        "tree_height": tree_height(problem.tree),
        "n_y": problem.index.n_y,
        "agents": report,
    }


def converged_all(outcomes: Sequence[RunOutcome]) -> bool:
    return all(o.status == STATUS_CONVERGED for o in outcomes)
