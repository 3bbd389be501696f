"""Trace (nuclear-norm) regularization of the matrix blocks."""

from dataclasses import dataclass, replace
from typing import Mapping, Sequence, Union

import numpy as np

from packages.relaxation.assignment import RelaxationError
from packages.relaxation.subproblem import AgentSubproblem
from packages.sdplinalg.svec import svec

Weight = Union[float, Mapping]


@dataclass
class RegularizationWeights:
    """
    Trace weights: alpha per agent (T blocks), rho per range pair (Gamma
    blocks), mu per anchor pair (Phi blocks). A float applies to every block
    of that kind; a mapping gives per-key weights, missing keys mean 0.
    """

    alpha: Weight = 0.0
    rho: Weight = 0.0
    mu: Weight = 0.0

    def is_zero(self) -> bool:
        return all(_max_weight(w) == 0.0 for w in (self.alpha, self.rho, self.mu))


def _max_weight(weight: Weight) -> float:
    if isinstance(weight, Mapping):
        return max((float(w) for w in weight.values()), default=0.0)
    return float(weight)


def _lookup(weight: Weight, key) -> float:
    if isinstance(weight, Mapping):
        return float(weight.get(key, 0.0))
    return float(weight)


def validate_regularization(weights: RegularizationWeights) -> dict[str, str]:
    errors = {}
    for name in ("alpha", "rho", "mu"):
        weight = getattr(weights, name)
        values = weight.values() if isinstance(weight, Mapping) else [weight]
        if any(not float(w) >= 0 for w in values):
            errors[name] = f"Regularization weight {name} must be non-negative"
    if errors:
        raise RelaxationError(f"invalid regularization weights: {errors}")
    return errors


def add_trace_regularization(
    subproblems: Sequence[AgentSubproblem], weights: RegularizationWeights
) -> list[AgentSubproblem]:
    """
    Add alpha_k tr(T^k) + sum rho_ij tr(Gamma^ij) + sum mu_ij tr(Phi^ij) to the costs.

    trace(X) = svec(I)^T svec(X), so each weight lands on the diagonal slots of
    its block in cx. Coupling structure is unchanged.

    Raises:
        RelaxationError: If any weight is negative
    """
    validate_regularization(weights)
    if weights.is_zero():
        return list(subproblems)

    out = []
    for sub in subproblems:
        cx = sub.cx_vec.copy()
        for key, order, block in zip(sub.block_keys, sub.block_orders, sub.block_slices):
            if key[0] == "T":
                w = _lookup(weights.alpha, sub.agent)
            elif key[0] == "range":
                w = _lookup(weights.rho, (key[1], key[2]))
            else:
                w = _lookup(weights.mu, (key[1], key[2]))
            if w:
                cx[block] += w * svec(np.eye(order))
        out.append(replace(sub, cx_vec=cx))
    return out
