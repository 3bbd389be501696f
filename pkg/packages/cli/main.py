"""treeloc command-line interface."""

import functools
import json
import logging
from pathlib import Path
from typing import Optional

import click

from packages.cli.config import SOLVERS, ExperimentConfig, parse_area
from packages.cli.pipeline import (
    USER_INDEX_BASE,
    converged_all,
    generate_runs,
    inspect_problem,
    prepare_problem,
    solve_runs,
)
from packages.cli.reports import aggregate_results, read_results, write_report, write_results
from packages.graphcore.graph import GraphError
from packages.msgpass.errors import MessagePassingError
from packages.pdipm.errors import SolverError
from packages.pdipm.options import SolverOptions
from packages.relaxation.assignment import RelaxationError
from packages.relaxation.dump import dump_subproblems
from packages.relaxation.regularization import RegularizationWeights
from packages.scenario.generator import STOCK_NOISE_LEVELS
from packages.scenario.storage import load_scenario
from packages.scenario.validation import ScenarioGenerationError, ValidationError
from packages.sdplinalg.svec import LinalgError

logger = logging.getLogger("treeloc.cli")

EXIT_OK = 0
EXIT_SOLVER_FAILURE = 1
EXIT_INPUT_ERROR = 2

# First matching class wins
ERROR_EXIT_CODES = (
    (SolverError, EXIT_SOLVER_FAILURE),
    (LinalgError, EXIT_SOLVER_FAILURE),
    (MessagePassingError, EXIT_SOLVER_FAILURE),
    (ValidationError, EXIT_INPUT_ERROR),
    (GraphError, EXIT_INPUT_ERROR),
    (RelaxationError, EXIT_INPUT_ERROR),
    (ScenarioGenerationError, EXIT_INPUT_ERROR),
    (OSError, EXIT_INPUT_ERROR),
)


def exit_code_for(error: Exception) -> int:
    for cls, code in ERROR_EXIT_CODES:
        if isinstance(error, cls):
            return code
    return EXIT_SOLVER_FAILURE


def _describe(error: Exception) -> str:
    if isinstance(error, ValidationError):
        return "; ".join(f"{field}: {message}" for field, message in error.errors.items())
    return str(error)


def handle_errors(command):
    """Map library exceptions to exit codes through ERROR_EXIT_CODES."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except click.exceptions.Exit:
            raise
        except click.ClickException:
            raise
        except Exception as e:
            code = exit_code_for(e)
            if not any(isinstance(e, cls) for cls, _ in ERROR_EXIT_CODES):
                logger.error(f"unexpected failure: {type(e).__name__} - {e}", exc_info=True)
            click.echo(f"Error: {_describe(e)}", err=True)
            raise click.exceptions.Exit(code) from e

    return wrapper


def _area(ctx, param, value: Optional[str]):
    if value is None:
        return None
    try:
        return parse_area(value)
    except ValidationError as e:
        raise click.BadParameter(e.errors["area"]) from e


def _root(ctx, param, value: str):
    """Parse a 1-based clique number into the 0-based index the tree uses."""
    if value == "auto":
        return None
    try:
        root = int(value)
    except ValueError:
        raise click.BadParameter("must be 'auto' or a clique number") from None
    if root < USER_INDEX_BASE:
        raise click.BadParameter(f"clique numbers start at {USER_INDEX_BASE}")
    return root - USER_INDEX_BASE


root_option = click.option(
    "--root",
    default="auto",
    callback=_root,
    show_default=True,
    help="Root clique of the tree: 'auto' (largest clique) or a 1-based clique number.",
)


@click.group()
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default="WARNING",
    show_default=True,
)
def cli(log_level: str):
    """Tree-structured sensor network localization by distributed interior-point SDP."""
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


@cli.command()
@click.option("--sensors", type=int, default=50, show_default=True)
@click.option("--anchors", type=int, default=9, show_default=True)
@click.option("--dim", type=click.IntRange(2, 3), default=2, show_default=True)
@click.option("--area", callback=_area, help="WxH or WxHxD; defaults to 0.8 per side.")
@click.option("--rc", type=float, default=0.2, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "--noise",
    type=float,
    multiple=True,
    help=f"Noise standard deviation, repeatable (stock levels: {STOCK_NOISE_LEVELS}).",
)
@click.option("--runs", type=int, default=1, show_default=True)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=Path("out"))
@handle_errors
def generate(sensors, anchors, dim, area, rc, seed, noise, runs, out_dir):
    """Generate scenario files, one per noise level and Monte Carlo run."""
    config = ExperimentConfig(
        sensors=sensors,
        anchors=anchors,
        dim=dim,
        area=area,
        rc=rc,
        seed=seed,
        noise=tuple(noise) if noise else (0.01,),
        runs=runs,
        out_dir=out_dir,
    )
    paths = generate_runs(config)
    for path in paths:
        click.echo(str(path))


@cli.command()
@click.argument(
    "scenarios", nargs=-1, required=True, type=click.Path(exists=True, path_type=Path)
)
@click.option("--solver", type=click.Choice(SOLVERS), default="distributed", show_default=True)
@root_option
@click.option("--eps-feas", type=float, default=1e-8, show_default=True)
@click.option("--eps-gap", type=float, default=1e-8, show_default=True)
@click.option("--max-iters", type=int, default=100, show_default=True)
@click.option("--gamma", type=float, default=0.95, show_default=True)
@click.option("--sigma-c", type=float, default=0.1, show_default=True)
@click.option("--reg-alpha", type=float, default=0.0, show_default=True)
@click.option("--reg-rho", type=float, default=0.0, show_default=True)
@click.option("--reg-mu", type=float, default=0.0, show_default=True)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=Path("out"))
@click.option("--trace", is_flag=True, help="Write the per-iteration trace CSV.")
@click.option("--commlog", is_flag=True, help="Write the communication log CSV.")
@click.option("--dump-subproblems", is_flag=True, help="Write the lowered subproblems as JSON.")
@handle_errors
def solve(
    scenarios,
    solver,
    root,
    eps_feas,
    eps_gap,
    max_iters,
    gamma,
    sigma_c,
    reg_alpha,
    reg_rho,
    reg_mu,
    out_dir,
    trace,
    commlog,
    dump_subproblems,
):
    """Localize the sensors of each scenario and write results.csv."""
    config = ExperimentConfig(
        solver=solver,
        root=root,
        solver_options=SolverOptions(
            eps_feas=eps_feas,
            eps_gap=eps_gap,
            max_iters=max_iters,
            gamma=gamma,
            sigma_c=sigma_c,
        ),
        regularization=RegularizationWeights(alpha=reg_alpha, rho=reg_rho, mu=reg_mu),
        out_dir=out_dir,
        trace=trace,
        commlog=commlog,
        dump_subproblems=dump_subproblems,
        input_paths=tuple(scenarios),
    )
    outcomes = solve_runs(config)
    results_path = out_dir / "results.csv"
    write_results(results_path, [o.row() for o in outcomes])
    for o in outcomes:
        click.echo(f"{o.run_id} {o.solver} {o.status}")
    click.echo(str(results_path))
    if not converged_all(outcomes):
        raise click.exceptions.Exit(EXIT_SOLVER_FAILURE)


@cli.command()
@click.argument("results", nargs=-1, required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--out", "out_dir", type=click.Path(path_type=Path), default=Path("out"))
@handle_errors
def report(results, out_dir):
    """Aggregate results CSVs per noise level and solver."""
    rows = [row for path in results for row in read_results(path)]
    aggregated = aggregate_results(rows)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / "report.csv"
    write_report(report_path, aggregated)
    click.echo(str(report_path))


@cli.command()
@click.argument("scenario", type=click.Path(exists=True, path_type=Path))
@root_option
@click.option(
    "--dump-subproblems",
    "dump_path",
    type=click.Path(path_type=Path),
    help="Write the lowered subproblems to this JSON file.",
)
@handle_errors
def inspect(scenario, root, dump_path):
    """Print fill, cliques, tree height and per-agent sizes of a scenario."""
    problem = prepare_problem(load_scenario(scenario), root)
    click.echo(json.dumps(inspect_problem(problem), indent=2))
    if dump_path is not None:
        dump_path.write_text(
            json.dumps(
                dump_subproblems(problem.index, problem.subproblems, USER_INDEX_BASE), indent=2
            )
        )


if __name__ == "__main__":
    cli()
