"""Distributed interior-point solve by message passing over the clique tree."""

from packages.msgpass.agents import (
    AgentNode,
    agent_height,
    agent_post_order,
    agent_pre_order,
    build_agent_tree,
    complexity_report,
)
from packages.msgpass.bus import MessageBus
from packages.msgpass.commlog import CommLog, CommRecord
from packages.msgpass.errors import AgentKKTSingularError, MessagePassingError
from packages.msgpass.messages import (
    LocalElimination,
    QuadraticMessage,
    local_qp_blocks,
    root_and_downward_solve,
    solve_direction_distributed,
    upward_message,
    upward_pass,
)
from packages.msgpass.reductions import (
    LocalPerturbation,
    PerturbationSums,
    local_perturbation,
    reduce_perturbation,
    reduce_step_sizes,
    tree_reduce_step_and_delta,
)
from packages.msgpass.solver import solve_distributed

__all__ = [
    "AgentKKTSingularError",
    "AgentNode",
    "CommLog",
    "CommRecord",
    "LocalElimination",
    "LocalPerturbation",
    "MessageBus",
    "MessagePassingError",
    "PerturbationSums",
    "QuadraticMessage",
    "agent_height",
    "agent_post_order",
    "agent_pre_order",
    "build_agent_tree",
    "complexity_report",
    "local_perturbation",
    "local_qp_blocks",
    "reduce_perturbation",
    "reduce_step_sizes",
    "root_and_downward_solve",
    "solve_direction_distributed",
    "solve_distributed",
    "tree_reduce_step_and_delta",
    "upward_message",
    "upward_pass",
]
