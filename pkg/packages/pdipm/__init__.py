"""Primal-dual interior-point method for the coupled SDP (centralized reference)."""

from packages.pdipm.completion import (
    CompletionMargin,
    clique_margin,
    completion_subproblem,
    solve_completion_margin,
)
from packages.pdipm.errors import KKTSingularError, SolverError
from packages.pdipm.kkt import (
    AgentDirection,
    AgentQP,
    SearchDirection,
    assemble_reduced_system,
    linearized_residual,
    recover_agent_direction,
    reduced_blocks,
    solve_kkt_centralized,
)
from packages.pdipm.options import SolverOptions, validate_solver_options
from packages.pdipm.residuals import (
    AgentResiduals,
    Residuals,
    agent_feasibility,
    agent_residuals,
    compute_residuals,
    constraint_norm,
)
from packages.pdipm.solver import (
    STATUS_CONVERGED,
    STATUS_MAX_ITERATIONS,
    SolveResult,
    TraceRow,
    objective_value,
    solve_centralized,
)
from packages.pdipm.state import (
    AgentIterate,
    IterateState,
    agent_complementarity,
    duality_measure,
    initial_iterate,
    is_strictly_interior,
)
from packages.pdipm.steps import (
    agent_step_bounds,
    apply_step,
    fraction_to_boundary,
    step_sizes,
    update_perturbation,
)

__all__ = [
    "AgentDirection",
    "AgentIterate",
    "AgentQP",
    "AgentResiduals",
    "CompletionMargin",
    "IterateState",
    "KKTSingularError",
    "Residuals",
    "STATUS_CONVERGED",
    "STATUS_MAX_ITERATIONS",
    "SearchDirection",
    "SolveResult",
    "SolverError",
    "SolverOptions",
    "TraceRow",
    "agent_complementarity",
    "agent_feasibility",
    "agent_residuals",
    "agent_step_bounds",
    "apply_step",
    "assemble_reduced_system",
    "clique_margin",
    "completion_subproblem",
    "compute_residuals",
    "constraint_norm",
    "duality_measure",
    "fraction_to_boundary",
    "initial_iterate",
    "is_strictly_interior",
    "linearized_residual",
    "objective_value",
    "recover_agent_direction",
    "reduced_blocks",
    "solve_centralized",
    "solve_completion_margin",
    "solve_kkt_centralized",
    "step_sizes",
    "update_perturbation",
    "validate_solver_options",
]
