"""Distributed primal-dual interior-point method over the clique tree.

Every iteration runs three upward-downward passes: the search direction by
quadratic-message elimination, the step sizes by a min-reduction, and the
perturbation and termination test by a sum-reduction. Each agent keeps its
own copy of y on J_k; shared coordinates stay equal because a child takes
its separator direction from its parent.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from packages.graphcore.clique_tree import CliqueTree
from packages.msgpass.agents import AgentNode, build_agent_tree
from packages.msgpass.bus import MessageBus
from packages.msgpass.commlog import PASS_PERTURBATION, PASS_SETUP, CommLog
from packages.msgpass.errors import AgentKKTSingularError
from packages.msgpass.messages import local_qp_blocks, solve_direction_distributed
from packages.msgpass.reductions import (
    PerturbationOutcome,
    local_perturbation,
    reduce_perturbation,
    reduce_step_sizes,
)
from packages.pdipm.errors import SolverError
from packages.pdipm.kkt import (
    AgentDirection,
    SearchDirection,
    linearized_residual,
    recover_agent_direction,
)
from packages.pdipm.options import SolverOptions, validate_solver_options
from packages.pdipm.residuals import agent_residuals, compute_residuals
from packages.pdipm.solver import (
    DIRECTION_CHECK_TOLERANCE,
    STATUS_CONVERGED,
    STATUS_MAX_ITERATIONS,
    SolveResult,
    TraceRow,
    objective_value,
)
from packages.pdipm.state import (
    AgentIterate,
    IterateState,
    agent_is_interior,
    initial_agent_iterate,
)
from packages.pdipm.steps import agent_step_bounds, step_agent
from packages.relaxation.indexing import GlobalVariableIndex
from packages.relaxation.subproblem import AgentSubproblem

logger = logging.getLogger("treeloc.msgpass.solver")


@dataclass
class AgentState:
    """Everything agent k knows between passes."""

    node: AgentNode
    iterate: AgentIterate
    y_local: np.ndarray
    delta: float = 0.0
    stop: bool = False

    @property
    def sub(self) -> AgentSubproblem:
        return self.node.subproblem


def assemble_state(states: Sequence[AgentState], n_y: int) -> IterateState:
    """Gather the agents' copies into one global iterate (for results and diagnostics)."""
    y = np.zeros(n_y)
    for s in states:
        y[s.node.var_index] = s.y_local
    delta = states[0].delta if states else 0.0
    return IterateState(y=y, agents=[s.iterate.copy() for s in states], delta=delta)


def _trace_row(iteration: int, outcome: PerturbationOutcome, t_p: float, t_d: float) -> TraceRow:
    return TraceRow(
        iteration=iteration,
        mu=outcome.broadcast.mu,
        delta=outcome.broadcast.delta,
        primal_residual=max(outcome.primal, outcome.primal_lin),
        dual_residual=max(outcome.dual, outcome.dual_lin),
        t_p=t_p,
        t_d=t_d,
    )


def _perturbation_pass(
    agents: Sequence[AgentNode],
    states: Sequence[AgentState],
    sigma_c: float,
    options: SolverOptions,
    bus: MessageBus,
    pass_name: str = PASS_PERTURBATION,
) -> PerturbationOutcome:
    local = {s.node.agent: local_perturbation(s.sub, s.iterate, s.y_local) for s in states}
    outcome, received = reduce_perturbation(agents, local, sigma_c, options, bus, pass_name)
    for s in states:
        s.delta = received[s.node.agent].delta
        s.stop = received[s.node.agent].stop
    return outcome


def _check_direction(
    states: Sequence[AgentState],
    directions: dict[int, tuple[np.ndarray, AgentDirection]],
    subproblems: Sequence[AgentSubproblem],
    n_y: int,
    iteration: int,
) -> None:
    state = assemble_state(states, n_y)
    dy = np.zeros(n_y)
    for s in states:
        dy[s.node.var_index] = directions[s.node.agent][0]
    direction = SearchDirection(dy=dy, agents=[directions[s.node.agent][1] for s in states])
    residuals = compute_residuals(state, subproblems)
    error = linearized_residual(state, residuals, direction, subproblems)
    if error > DIRECTION_CHECK_TOLERANCE:
        logger.warning(
            f"distributed direction misses the linearized system by {error:.2e}",
            extra={"iteration": iteration},
        )


def solve_distributed(
    tree: CliqueTree,
    index: GlobalVariableIndex,
    subproblems: Sequence[AgentSubproblem],
    options: Optional[SolverOptions] = None,
) -> tuple[SolveResult, CommLog]:
    """
    Solve the coupled SDP by message passing over the clique tree.

    A setup pass computes the starting perturbation delta_0 = mu_0 and the
    first termination test; it is logged under "setup" and not counted as
    a solver pass.

    Args:
        tree: Clique tree whose nodes are the agents
        index: Global layout of y
        subproblems: One subproblem per clique
        options: Solver options, defaults if omitted

    Returns:
        (SolveResult in the same form as the centralized solver, CommLog)

    Raises:
        AgentKKTSingularError: If an agent's local KKT matrix is singular
        SolverError: If an accepted iterate leaves the interior
        MessagePassingError: If the tree and the index sets disagree
    """
    options = options or SolverOptions()
    validate_solver_options(options)
    agents = build_agent_tree(tree, index, subproblems)
    log = CommLog.for_agents(agents)
    bus = MessageBus(log)
    states = [
        AgentState(
            node=a,
            iterate=initial_agent_iterate(a.subproblem),
            y_local=a.subproblem.y_start.copy(),
        )
        for a in agents
    ]
    logger.info(
        f"distributed solve: {len(agents)} agents, tree height {log.tree_height}",
        extra={"agents": len(agents)},
    )

    outcome = _perturbation_pass(agents, states, 1.0, options, bus, PASS_SETUP)
    trace = [_trace_row(0, outcome, 0.0, 0.0)]
    iteration = 0
    decreases = 0

    while not outcome.broadcast.stop and iteration < options.max_iters:
        iteration += 1
        bus.iteration = iteration

        residuals = {
            s.node.agent: agent_residuals(s.sub, s.iterate, s.y_local, s.delta) for s in states
        }
        qps = {
            s.node.agent: local_qp_blocks(s.node, s.iterate, s.y_local, residuals[s.node.agent])
            for s in states
        }
        try:
            solutions = solve_direction_distributed(agents, qps, bus)
        except AgentKKTSingularError as e:
            e.state = assemble_state(states, index.n_y)
            e.iteration = iteration
            raise

        directions = {}
        for s in states:
            k = s.node.agent
            w, nu = solutions[k]
            dy_local, dx = w[: s.node.n_j], w[s.node.n_j :]
            directions[k] = (
                dy_local,
                recover_agent_direction(
                    s.sub, s.iterate, s.y_local, residuals[k], dy_local, dx, nu
                ),
            )
        if options.check_directions:
            _check_direction(states, directions, subproblems, index.n_y, iteration)

        bounds = {}
        for s in states:
            dy_local, direction = directions[s.node.agent]
            bounds[s.node.agent] = agent_step_bounds(
                s.sub, s.iterate, s.y_local, direction, dy_local
            )
        steps = reduce_step_sizes(agents, bounds, options.gamma, bus)
        for s in states:
            t_p, t_d = steps[s.node.agent]
            dy_local, direction = directions[s.node.agent]
            s.iterate = step_agent(s.iterate, direction, t_p, t_d)
            s.y_local = s.y_local + t_p * dy_local
            if not agent_is_interior(s.sub, s.iterate, s.y_local):
                raise SolverError(
                    f"agent {s.node.agent} iterate left the interior",
                    state=assemble_state(states, index.n_y),
                    iteration=iteration,
                )

        previous_mu = outcome.broadcast.mu
        outcome = _perturbation_pass(agents, states, options.sigma_c, options, bus)
        decreases += outcome.broadcast.mu < previous_mu
        t_p, t_d = steps[agents[0].agent]
        trace.append(_trace_row(iteration, outcome, t_p, t_d))
        logger.debug(
            f"iter {iteration}: mu={outcome.broadcast.mu:.3e} "
            f"res={outcome.scaled_residual:.3e} t_p={t_p:.3f} t_d={t_d:.3f}",
            extra={"iteration": iteration},
        )

    log.iterations = iteration
    converged = outcome.broadcast.stop
    status = STATUS_CONVERGED if converged else STATUS_MAX_ITERATIONS
    state = assemble_state(states, index.n_y)
    if not converged:
        logger.warning(
            f"distributed solve stopped after {iteration} iterations "
            f"(mu={outcome.broadcast.mu:.2e})",
            extra={"status": status},
        )
    logger.info(
        f"distributed solve {status} in {iteration} iterations, mu decreased in {decreases}, "
        f"{log.summary()['per_agent_communications']} communications per agent",
        extra={"status": status, "iterations": iteration},
    )
    result = SolveResult(
        status=status,
        y=state.y.copy(),
        state=state,
        objective=objective_value(state, subproblems),
        iterations=iteration,
        mu=outcome.broadcast.mu,
        scaled_residual=outcome.scaled_residual,
        trace=trace,
    )
    return result, log
