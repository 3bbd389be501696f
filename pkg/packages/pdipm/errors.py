"""Solver exceptions."""

from typing import Optional

from packages.pdipm.state import IterateState


class SolverError(Exception):
    """Raised when the interior-point method cannot continue; carries the last iterate."""

    def __init__(self, message: str, state: Optional[IterateState] = None, iteration: int = 0):
        super().__init__(message)
        self.state = state
        self.iteration = iteration


class KKTSingularError(SolverError):
    """Raised when the reduced KKT system cannot be factorized."""
