"""Message-passing exceptions."""

from typing import Optional

from packages.pdipm.errors import KKTSingularError
from packages.pdipm.state import IterateState


class MessagePassingError(Exception):
    """Raised when the agent tree and the variable index disagree."""


class AgentKKTSingularError(KKTSingularError):
    """Raised when one agent's local saddle-point matrix cannot be factorized."""

    def __init__(
        self,
        agent: int,
        detail: str = "",
        state: Optional[IterateState] = None,
        iteration: int = 0,
    ):
        message = f"agent {agent} KKT singular"
        if detail:
            message += f" ({detail}); check for duplicate measurements"
        super().__init__(message, state=state, iteration=iteration)
        self.agent = agent
