"""Upward-downward reductions for step sizes, perturbation and termination.

Step pass: every agent sends min(own, children's) primal and dual boundary
bounds upward (2 scalars); the root applies the fraction-to-boundary rule and
broadcasts (t_p, t_d) (2 scalars).

Perturbation pass: every agent sends 7 summed scalars upward (complementarity
sum and count, squared norms of r_p, r_p_lin, r_d, the finalized part of
r_d_lin, and of b) together with its partial sum of r_d_lin on the separator.
A coordinate of r_d_lin is final at the highest agent holding it, since the
agents sharing a coordinate form a subtree. The root broadcasts (delta, mu,
stop) (3 scalars).

Minima agree bitwise with the centralized computation; sums agree up to
rounding because they are added in tree order instead of agent order.
"""

import math
from dataclasses import dataclass, replace
from typing import Any, Callable, Optional, Sequence

import numpy as np

from packages.msgpass.agents import AgentNode, agent_post_order, agent_pre_order, root_of
from packages.msgpass.bus import MessageBus
from packages.msgpass.commlog import (
    PASS_PERTURBATION,
    PASS_STEP,
    SWEEP_DOWN,
    SWEEP_UP,
    CommLog,
)
from packages.msgpass.messages import message_positions
from packages.pdipm.options import SolverOptions
from packages.pdipm.residuals import agent_feasibility
from packages.pdipm.state import AgentIterate, agent_complementarity
from packages.pdipm.steps import fraction_to_boundary
from packages.relaxation.subproblem import AgentSubproblem

STEP_UP_SCALARS = 2
STEP_DOWN_SCALARS = 2
PERTURBATION_UP_SCALARS = 7
PERTURBATION_DOWN_SCALARS = 3


@dataclass(frozen=True)
class PerturbationSums:
    comp_sum: float = 0.0
    comp_count: int = 0
    primal_sq: float = 0.0
    primal_lin_sq: float = 0.0
    dual_sq: float = 0.0
    dual_lin_sq: float = 0.0
    b_sq: float = 0.0

    def __add__(self, other: "PerturbationSums") -> "PerturbationSums":
        return PerturbationSums(
            self.comp_sum + other.comp_sum,
            self.comp_count + other.comp_count,
            self.primal_sq + other.primal_sq,
            self.primal_lin_sq + other.primal_lin_sq,
            self.dual_sq + other.dual_sq,
            self.dual_lin_sq + other.dual_lin_sq,
            self.b_sq + other.b_sq,
        )


@dataclass(eq=False)
class LocalPerturbation:
    """An agent's sums and its partial r_d_lin on J_k."""

    sums: PerturbationSums
    r_d_lin: np.ndarray


@dataclass(frozen=True, eq=False)
class PerturbationMessage:
    sums: PerturbationSums
    coords: np.ndarray
    values: np.ndarray

    @property
    def payload(self) -> int:
        return PERTURBATION_UP_SCALARS + len(self.coords)


@dataclass(frozen=True)
class PerturbationBroadcast:
    delta: float
    mu: float
    stop: bool


@dataclass(frozen=True)
class PerturbationOutcome:
    """What the root computes; only the broadcast part travels down."""

    broadcast: PerturbationBroadcast
    scaled_residual: float
    primal: float
    primal_lin: float
    dual: float
    dual_lin: float
    b_norm: float


def local_perturbation(
    sub: AgentSubproblem, it: AgentIterate, y_local: np.ndarray
) -> LocalPerturbation:
    r_p, r_p_lin, r_d, r_d_lin_part = agent_feasibility(sub, it, y_local)
    comp_sum, comp_count = agent_complementarity(sub, it, y_local)
    return LocalPerturbation(
        sums=PerturbationSums(
            comp_sum=comp_sum,
            comp_count=comp_count,
            primal_sq=float(r_p @ r_p),
            primal_lin_sq=float(r_p_lin @ r_p_lin),
            dual_sq=float(r_d @ r_d),
            b_sq=float(sub.b_vec @ sub.b_vec) + float(sub.b_bar @ sub.b_bar),
        ),
        r_d_lin=r_d_lin_part.copy(),
    )


def tree_reduce(
    agents: Sequence[AgentNode],
    local: dict[int, Any],
    combine: Callable[[AgentNode, Any, Any], Any],
    prepare: Callable[[AgentNode, Any], Any],
    finalize: Callable[[Any], Any],
    broadcast: Callable[[Any], Any],
    bus: MessageBus,
    pass_name: str,
    up_scalars: Callable[[Any], int],
    down_scalars: int,
) -> tuple[Any, dict[int, Any]]:
    """
    Fold local values up the tree, finalize at the root and broadcast down.

    Children are folded in ascending id. prepare turns an agent's folded value
    into its upward message (also applied at the root before finalize).

    Returns:
        (root result, the broadcast value received by every agent)
    """
    up_order = agent_post_order(agents)
    bus.open_sweep(pass_name, SWEEP_UP, up_order)
    root_value = None
    for k in up_order:
        node = agents[k]
        acc = local[k]
        for c in node.children:
            acc = combine(node, acc, bus.receive(c, k))
        message = prepare(node, acc)
        if node.is_root:
            root_value = message
        else:
            bus.send(k, node.parent, message, up_scalars(message))
    bus.close_sweep()

    result = finalize(root_value)
    down_order = agent_pre_order(agents)
    received = {}
    bus.open_sweep(pass_name, SWEEP_DOWN, down_order)
    for k in down_order:
        node = agents[k]
        value = broadcast(result) if node.is_root else bus.receive(node.parent, k)
        received[k] = value
        for c in node.children:
            bus.send(k, c, value, down_scalars)
    bus.close_sweep()
    return result, received


def reduce_step_sizes(
    agents: Sequence[AgentNode],
    bounds: dict[int, tuple[float, float]],
    gamma: float,
    bus: MessageBus,
) -> dict[int, tuple[float, float]]:
    """Per agent, the (t_p, t_d) received from the min-reduction of boundary bounds."""

    def step(pair):
        return fraction_to_boundary(pair[0], gamma), fraction_to_boundary(pair[1], gamma)

    _, received = tree_reduce(
        agents,
        bounds,
        combine=lambda node, acc, msg: (min(acc[0], msg[0]), min(acc[1], msg[1])),
        prepare=lambda node, acc: acc,
        finalize=step,
        broadcast=lambda result: result,
        bus=bus,
        pass_name=PASS_STEP,
        up_scalars=lambda msg: STEP_UP_SCALARS,
        down_scalars=STEP_DOWN_SCALARS,
    )
    return received


def _fold_perturbation(
    node: AgentNode, acc: LocalPerturbation, message: PerturbationMessage
) -> LocalPerturbation:
    r_d_lin = acc.r_d_lin.copy()
    r_d_lin[message_positions(node, message.coords)] += message.values
    return LocalPerturbation(acc.sums + message.sums, r_d_lin)


def _finish_perturbation(node: AgentNode, acc: LocalPerturbation) -> PerturbationMessage:
    sep = node.separator_positions
    final = np.ones(node.n_j, dtype=bool)
    final[sep] = False
    finished = acc.r_d_lin[final]
    sums = replace(acc.sums, dual_lin_sq=acc.sums.dual_lin_sq + float(finished @ finished))
    return PerturbationMessage(sums=sums, coords=node.separator, values=acc.r_d_lin[sep])


def reduce_perturbation(
    agents: Sequence[AgentNode],
    local: dict[int, LocalPerturbation],
    sigma_c: float,
    options: SolverOptions,
    bus: MessageBus,
    pass_name: str = PASS_PERTURBATION,
) -> tuple[PerturbationOutcome, dict[int, PerturbationBroadcast]]:
    """
    Sum-reduce complementarity and residual norms; the root sets delta = sigma_c * mu
    and decides termination.
    """

    def finalize(message: PerturbationMessage) -> PerturbationOutcome:
        sums = message.sums
        mu = sums.comp_sum / sums.comp_count if sums.comp_count else 0.0
        norms = [
            math.sqrt(v)
            for v in (sums.primal_sq, sums.primal_lin_sq, sums.dual_sq, sums.dual_lin_sq)
        ]
        b_norm = math.sqrt(sums.b_sq)
        scaled = max(norms) / (1.0 + b_norm)
        stop = scaled <= options.eps_feas and mu <= options.eps_gap
        return PerturbationOutcome(
            broadcast=PerturbationBroadcast(delta=sigma_c * mu, mu=mu, stop=stop),
            scaled_residual=scaled,
            primal=norms[0],
            primal_lin=norms[1],
            dual=norms[2],
            dual_lin=norms[3],
            b_norm=b_norm,
        )

    return tree_reduce(
        agents,
        local,
        combine=_fold_perturbation,
        prepare=_finish_perturbation,
        finalize=finalize,
        broadcast=lambda outcome: outcome.broadcast,
        bus=bus,
        pass_name=pass_name,
        up_scalars=lambda msg: msg.payload,
        down_scalars=PERTURBATION_DOWN_SCALARS,
    )


def tree_reduce_step_and_delta(
    agents: Sequence[AgentNode],
    bounds: dict[int, tuple[float, float]],
    local: dict[int, LocalPerturbation],
    options: SolverOptions,
    bus: Optional[MessageBus] = None,
) -> tuple[float, float, float, bool]:
    """
    Run the step-size pass and the perturbation pass on given local quantities.

    Returns:
        (t_p, t_d, delta, stop) as received by the root
    """
    bus = bus or MessageBus(CommLog.for_agents(agents))
    steps = reduce_step_sizes(agents, bounds, options.gamma, bus)
    outcome, _ = reduce_perturbation(agents, local, options.sigma_c, options, bus)
    t_p, t_d = steps[root_of(agents)]
    return t_p, t_d, outcome.broadcast.delta, outcome.broadcast.stop
