"""In-process message bus with FIFO delivery per directed tree edge."""

import logging
from collections import defaultdict, deque
from typing import Any, Optional, Sequence

from packages.msgpass.commlog import CommLog
from packages.msgpass.errors import MessagePassingError

logger = logging.getLogger("treeloc.msgpass.bus")


class MessageBus:
    """
    Delivers immutable values between neighbouring agents and logs every send.

    Sends are grouped in sweeps: open_sweep names the pass and direction,
    close_sweep writes one CommLog record per agent and checks that every
    message was received exactly once.

    Every message carries the step it was sent at: one past the latest step
    among the messages its sender had received in the sweep.
    """

    def __init__(self, log: CommLog):
        self.log = log
        self.iteration = 0
        self._queues: dict[tuple[int, int], deque] = defaultdict(deque)
        self._sweep: Optional[tuple[str, str]] = None
        self._sent: dict[int, list[int]] = {}
        self._ready: dict[int, int] = {}

    def open_sweep(self, pass_name: str, sweep: str, agents: Sequence[int]) -> None:
        if self._sweep is not None:
            raise MessagePassingError(f"sweep {self._sweep} still open")
        self._sweep = (pass_name, sweep)
        self._sent = {k: [0, 0, 0] for k in agents}
        self._ready = {k: 0 for k in agents}

    def send(self, sender: int, receiver: int, payload: Any, scalars: int) -> None:
        if self._sweep is None:
            raise MessagePassingError("send outside of a sweep")
        if sender not in self._sent:
            raise MessagePassingError(f"agent {sender} is not part of this sweep")
        if self.log.parents.get(sender) != receiver and self.log.parents.get(receiver) != sender:
            raise MessagePassingError(f"agents {sender} and {receiver} are not neighbours")
        step = self._ready[sender] + 1
        self._queues[(sender, receiver)].append((step, payload))
        sent = self._sent[sender]
        sent[0] += 1
        sent[1] += scalars
        sent[2] = max(sent[2], step)

    def receive(self, sender: int, receiver: int) -> Any:
        queue = self._queues.get((sender, receiver))
        if not queue:
            raise MessagePassingError(f"no message from agent {sender} to agent {receiver}")
        step, payload = queue.popleft()
        if receiver in self._ready:
            self._ready[receiver] = max(self._ready[receiver], step)
        return payload

    def close_sweep(self) -> None:
        pending = {edge: len(q) for edge, q in self._queues.items() if q}
        if pending:
            raise MessagePassingError(f"undelivered messages: {pending}")
        pass_name, sweep = self._sweep
        for agent, (msgs, scalars, step) in self._sent.items():
            self.log.record(self.iteration, pass_name, sweep, agent, msgs, scalars, step=step)
        logger.debug(
            f"iter {self.iteration} {pass_name}/{sweep}: "
            f"{sum(s[0] for s in self._sent.values())} messages in "
            f"{max((s[2] for s in self._sent.values()), default=0)} steps"
        )
        self._sweep = None
        self._sent = {}
        self._ready = {}
