"""Communication accounting for the distributed solver."""

import csv
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

from packages.msgpass.agents import AgentNode, agent_height

PASS_SETUP = "setup"
PASS_DIRECTION = "direction"
PASS_STEP = "step"
PASS_PERTURBATION = "perturbation"
SOLVER_PASSES = (PASS_DIRECTION, PASS_STEP, PASS_PERTURBATION)
SWEEP_UP = "up"
SWEEP_DOWN = "down"

CSV_HEADER = ["iter", "pass", "sweep", "agent", "msgs_sent", "scalars_sent", "step"]


@dataclass
class CommRecord:
    iteration: int
    pass_name: str
    sweep: str
    agent: int
    msgs_sent: int
    scalars_sent: int
    # last step of the sweep at which this agent sent; 0 if it sent nothing
    step: int = 0


@dataclass
class CommLog:
    """
    Messages and scalars sent per (iteration, pass, sweep, agent).

    A communication of an agent is one message over the edge to its parent,
    in either direction. Every solver pass costs each non-root agent one
    upward and one downward communication, so a run of p iterations costs
    6 p per agent. The setup pass before the first iteration is logged but
    not counted.
    """

    parents: dict[int, Optional[int]]
    tree_height: int
    records: list[CommRecord] = field(default_factory=list)
    factorizations: Counter = field(default_factory=Counter)
    iterations: int = 0

    @classmethod
    def for_agents(cls, agents: Sequence[AgentNode]) -> "CommLog":
        return cls(parents={a.agent: a.parent for a in agents}, tree_height=agent_height(agents))

    def record(
        self,
        iteration: int,
        pass_name: str,
        sweep: str,
        agent: int,
        msgs_sent: int,
        scalars_sent: int,
        step: int = 0,
    ) -> None:
        self.records.append(
            CommRecord(iteration, pass_name, sweep, agent, msgs_sent, scalars_sent, step)
        )

    def count_factorization(self, agent: int) -> None:
        self.factorizations[agent] += 1

    def _solver_records(self) -> list[CommRecord]:
        return [r for r in self.records if r.pass_name in SOLVER_PASSES]

    def per_agent_communications(self) -> dict[int, int]:
        """Upward messages sent plus downward messages received, per non-root agent."""
        counts = {k: 0 for k, p in self.parents.items() if p is not None}
        children = defaultdict(list)
        for k, p in self.parents.items():
            if p is not None:
                children[p].append(k)
        for r in self._solver_records():
            if r.sweep == SWEEP_UP and r.agent in counts:
                counts[r.agent] += r.msgs_sent
            elif r.sweep == SWEEP_DOWN and r.msgs_sent:
                for k in children[r.agent]:
                    counts[k] += 1
        return counts

    def passes(self) -> int:
        return len({(r.iteration, r.pass_name) for r in self._solver_records()})

    def sequential_steps(self) -> int:
        """
        Rounds of communication the solver passes needed, counted from the sends.

        A sweep lasts as long as its latest send, so a full sweep over a tree
        of height h takes h steps and a sweep that sends nothing takes none.
        """
        sweep_steps = defaultdict(int)
        for r in self._solver_records():
            key = (r.iteration, r.pass_name, r.sweep)
            sweep_steps[key] = max(sweep_steps[key], r.step)
        return sum(sweep_steps.values())

    def total_messages(self) -> int:
        return sum(r.msgs_sent for r in self.records)

    def total_scalars(self) -> int:
        return sum(r.scalars_sent for r in self.records)

    def summary(self) -> dict[str, Any]:
        per_agent = self.per_agent_communications()
        return {
            "iterations": self.iterations,
            "tree_height": self.tree_height,
            "per_agent_communications": max(per_agent.values(), default=0),
            "messages": self.total_messages(),
            "scalars": self.total_scalars(),
            "factorizations": sum(self.factorizations.values()),
            "sequential_steps": self.sequential_steps(),
        }

    def write_csv(self, path: Path, index_base: int = 0) -> None:
        """
        One row per record, then a summary row:
        iter = p, pass = "summary", sweep empty, agent = per-agent communications,
        msgs_sent and scalars_sent = totals over the run, step = sequential steps.

        Args:
            path: Output file
            index_base: Added to agent ids in the record rows (1 for user-facing files)
        """
        summary = self.summary()
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for r in self.records:
                writer.writerow(
                    [
                        r.iteration,
                        r.pass_name,
                        r.sweep,
                        r.agent + index_base,
                        r.msgs_sent,
                        r.scalars_sent,
                        r.step,
                    ]
                )
            writer.writerow(
                [
                    summary["iterations"],
                    "summary",
                    "",
                    summary["per_agent_communications"],
                    summary["messages"],
                    summary["scalars"],
                    summary["sequential_steps"],
                ]
            )
