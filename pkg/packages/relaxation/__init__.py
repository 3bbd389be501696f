"""Decomposed convex relaxation: measurement assignment and per-agent standard-form blocks."""

from packages.relaxation.assignment import Assignment, RelaxationError, assign_measurements
from packages.relaxation.dump import dump_subproblems
from packages.relaxation.indexing import GlobalVariableIndex, build_variable_index
from packages.relaxation.lifting import (
    LiftedPoint,
    extract_positions,
    lift_point,
    measurement_cost,
    rank_diagnostics,
    relaxation_objective,
)
from packages.relaxation.regularization import (
    RegularizationWeights,
    add_trace_regularization,
    validate_regularization,
)
from packages.relaxation.subproblem import AgentSubproblem, build_subproblems, expected_counts

__all__ = [
    "AgentSubproblem",
    "Assignment",
    "GlobalVariableIndex",
    "LiftedPoint",
    "RegularizationWeights",
    "RelaxationError",
    "add_trace_regularization",
    "assign_measurements",
    "build_subproblems",
    "build_variable_index",
    "dump_subproblems",
    "expected_counts",
    "extract_positions",
    "lift_point",
    "measurement_cost",
    "rank_diagnostics",
    "relaxation_objective",
    "validate_regularization",
]
