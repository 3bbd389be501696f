"""JSON-serializable dump of the lowered subproblems for debugging."""

from typing import Any, Sequence

from packages.relaxation.indexing import GlobalVariableIndex
from packages.relaxation.subproblem import AgentSubproblem, BlockKey


def _shift_key(key: BlockKey, index_base: int) -> list:
    tag, *ids = key
    return [tag, *(i + index_base for i in ids)]


def dump_subproblems(
    index: GlobalVariableIndex, subproblems: Sequence[AgentSubproblem], index_base: int = 0
) -> dict[str, Any]:
    """
    Block sizes, row counts and index sets of every agent.

    Agent, sensor and anchor ids are shifted by index_base; var_index holds
    offsets into y and is always 0-based.
    """
    return {
        "index_base": index_base,
        "dim": index.dim,
        "n_sensors": index.n_sensors,
        "n_y": index.n_y,
        "agents": [
            {
                "agent": sub.agent + index_base,
                "clique": [v + index_base for v in sub.clique],
                "blocks": [
                    {"key": _shift_key(key, index_base), "order": order}
                    for key, order in zip(sub.block_keys, sub.block_orders)
                ],
                "var_index": [int(g) for g in sub.var_index],
                "n_local": sub.n_local,
                "n_coupling_rows": sub.n_coupling,
                "n_linear_rows": sub.n_linear,
                "n_inequalities": sub.n_inequalities,
                "cost_offset": sub.offset,
            }
            for sub in subproblems
        ],
    }
