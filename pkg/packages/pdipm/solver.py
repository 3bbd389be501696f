"""Centralized primal-dual interior-point method for the coupled SDP."""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from packages.pdipm.errors import SolverError
from packages.pdipm.kkt import linearized_residual, solve_kkt_centralized
from packages.pdipm.options import SolverOptions, validate_solver_options
from packages.pdipm.residuals import Residuals, compute_residuals, constraint_norm
from packages.pdipm.state import (
    IterateState,
    duality_measure,
    initial_iterate,
    is_strictly_interior,
)
from packages.pdipm.steps import apply_step, step_sizes, update_perturbation
from packages.relaxation.subproblem import AgentSubproblem

logger = logging.getLogger("treeloc.pdipm.solver")

DIRECTION_CHECK_TOLERANCE = 1e-8
STATUS_CONVERGED = "converged"
STATUS_MAX_ITERATIONS = "max-iterations"


@dataclass
class TraceRow:
    iteration: int
    mu: float
    delta: float
    primal_residual: float
    dual_residual: float
    t_p: float
    t_d: float


@dataclass
class SolveResult:
    """
    Outcome of an interior-point solve.

    status is "converged" or "max-iterations"; in both cases state holds the
    last iterate and y its linear part.
    """

    status: str
    y: np.ndarray
    state: IterateState
    objective: float
    iterations: int
    mu: float
    scaled_residual: float
    trace: list[TraceRow] = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return self.status == STATUS_CONVERGED

    @property
    def x_blocks(self) -> list[np.ndarray]:
        return [a.x for a in self.state.agents]


def objective_value(state: IterateState, subproblems: Sequence[AgentSubproblem]) -> float:
    """Sum of c^T y_J + cx^T x + offset over agents."""
    return sum(
        float(sub.c_vec @ state.y[sub.var_index]) + float(sub.cx_vec @ it.x) + sub.offset
        for sub, it in zip(subproblems, state.agents)
    )


def trace_row(
    iteration: int, mu: float, delta: float, res: Residuals, t_p: float, t_d: float
) -> TraceRow:
    return TraceRow(
        iteration=iteration,
        mu=mu,
        delta=delta,
        primal_residual=max(res.primal, res.primal_lin),
        dual_residual=max(res.dual, res.dual_lin),
        t_p=t_p,
        t_d=t_d,
    )


def is_converged(scaled_residual: float, mu: float, options: SolverOptions) -> bool:
    return scaled_residual <= options.eps_feas and mu <= options.eps_gap


def solve_centralized(
    subproblems: Sequence[AgentSubproblem],
    options: Optional[SolverOptions] = None,
    n_y: Optional[int] = None,
) -> SolveResult:
    """
    Run the path-following interior-point method on the whole coupled problem.

    Each iteration computes a direction from the reduced KKT system, takes
    fraction-to-boundary primal and dual steps, sets delta = sigma_c * mu and
    re-evaluates the residuals. The run stops when
    max(||r_p||, ||r_p_lin||, ||r_d||, ||r_d_lin||) / (1 + ||b||) <= eps_feas
    and mu <= eps_gap.

    Args:
        subproblems: Per-agent blocks of the coupled problem
        options: Solver options, defaults if omitted
        n_y: Length of y; inferred from the index sets if omitted

    Returns:
        SolveResult with status "converged" or "max-iterations"

    Raises:
        KKTSingularError: If a reduced KKT system is singular
        SolverError: If an accepted iterate leaves the interior
    """
    options = options or SolverOptions()
    validate_solver_options(options)
    b_norm = constraint_norm(subproblems)

    state = initial_iterate(subproblems, n_y)
    residuals = compute_residuals(state, subproblems)
    mu = duality_measure(state, subproblems)
    scaled = residuals.scaled_max(b_norm)
    trace = [trace_row(0, mu, state.delta, residuals, 0.0, 0.0)]
    decreases = 0
    iteration = 0
    logger.info(
        f"centralized solve: {len(subproblems)} agents, {len(state.y)} linear variables",
        extra={"agents": len(subproblems)},
    )

    while not is_converged(scaled, mu, options) and iteration < options.max_iters:
        iteration += 1
        try:
            direction = solve_kkt_centralized(state, residuals, subproblems)
        except SolverError as e:
            e.iteration = iteration
            raise
        if options.check_directions:
            error = linearized_residual(state, residuals, direction, subproblems)
            if error > DIRECTION_CHECK_TOLERANCE:
                logger.warning(
                    f"direction misses the linearized system by {error:.2e}",
                    extra={"iteration": iteration},
                )

        t_p, t_d = step_sizes(state, direction, subproblems, options.gamma)
        state = apply_step(state, direction, t_p, t_d)
        if not is_strictly_interior(state, subproblems):
            raise SolverError("iterate left the interior", state=state, iteration=iteration)

        previous_mu = mu
        mu = duality_measure(state, subproblems)
        state.delta = update_perturbation(state, subproblems, options.sigma_c)
        residuals = compute_residuals(state, subproblems)
        scaled = residuals.scaled_max(b_norm)
        decreases += mu < previous_mu
        trace.append(trace_row(iteration, mu, state.delta, residuals, t_p, t_d))
        logger.debug(
            f"iter {iteration}: mu={mu:.3e} res={scaled:.3e} t_p={t_p:.3f} t_d={t_d:.3f}",
            extra={"iteration": iteration},
        )

    status = STATUS_CONVERGED if is_converged(scaled, mu, options) else STATUS_MAX_ITERATIONS
    if status != STATUS_CONVERGED:
        logger.warning(
            f"centralized solve stopped after {iteration} iterations (mu={mu:.2e})",
            extra={"status": status},
        )
    logger.info(
        f"centralized solve {status} in {iteration} iterations, mu decreased in {decreases}",
        extra={"status": status, "iterations": iteration},
    )
    return SolveResult(
        status=status,
        y=state.y.copy(),
        state=state,
        objective=objective_value(state, subproblems),
        iterations=iteration,
        mu=mu,
        scaled_residual=scaled,
        trace=trace,
    )
