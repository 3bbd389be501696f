"""Dense symmetric-indefinite (Bunch-Kaufman) factorization with reusable solves."""

import logging
from typing import Optional

import numpy as np
import scipy.linalg

from packages.sdplinalg.svec import LinalgError

logger = logging.getLogger("treeloc.sdplinalg.factorization")

BACKWARD_ERROR_LIMIT = 1e-6


class SingularFactorizationError(LinalgError):
    """Raised when a symmetric system cannot be solved reliably."""

    def __init__(self, message: str, order: int, backward_error: Optional[float] = None):
        super().__init__(message)
        self.order = order
        self.backward_error = backward_error


class SymmetricIndefiniteFactor:
    """
    Factor K = P^T L B L^T P once and solve against any number of right-hand sides.

    B is block diagonal with 1x1 and 2x2 pivots. A solve is rejected when a
    pivot block is exactly singular, the result is not finite, or the normwise
    backward error exceeds BACKWARD_ERROR_LIMIT. Ill-conditioning alone is not
    an error: interior-point systems become badly conditioned near the optimum.
    """

    def __init__(self, matrix: np.ndarray):
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise LinalgError(f"expected a square matrix, got shape {matrix.shape}")
        self.order = matrix.shape[0]
        self._matrix = matrix if np.array_equal(matrix, matrix.T) else 0.5 * (matrix + matrix.T)
        self._norm = float(np.linalg.norm(self._matrix))
        if self.order == 0:
            self._pivot_eigenvalues = np.zeros(0)
            return
        if not np.all(np.isfinite(self._matrix)):
            raise SingularFactorizationError("matrix has non-finite entries", self.order)

        lu, pivots, perm = scipy.linalg.ldl(self._matrix, lower=True)
        self._perm = perm
        self._lower = lu[perm]
        del lu
        diag = np.diag(pivots).copy()
        off = np.diag(pivots, -1).copy()
        self._banded = np.zeros((3, self.order))
        self._banded[0, 1:] = off
        self._banded[1] = diag
        self._banded[2, :-1] = off
        self._pivot_eigenvalues = (
            scipy.linalg.eigvalsh_tridiagonal(diag, off) if self.order > 1 else diag
        )
        if not np.all(np.isfinite(self._pivot_eigenvalues)) or np.any(
            self._pivot_eigenvalues == 0.0
        ):
            raise SingularFactorizationError(
                f"singular pivot in symmetric factorization of order {self.order}", self.order
            )

    def inertia(self) -> tuple[int, int, int]:
        """Return (positive, negative, zero) eigenvalue counts of the factored matrix."""
        vals = self._pivot_eigenvalues
        return int(np.sum(vals > 0)), int(np.sum(vals < 0)), int(np.sum(vals == 0))

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """
        Solve K x = rhs for a vector or a matrix of right-hand sides.

        Raises:
            SingularFactorizationError: If the solution fails the backward-error test
        """
        rhs = np.asarray(rhs, dtype=float)
        if rhs.shape[0] != self.order:
            raise LinalgError(f"rhs has {rhs.shape[0]} rows, matrix order is {self.order}")
        if self.order == 0:
            return np.zeros_like(rhs)

        step = scipy.linalg.solve_triangular(
            self._lower, rhs[self._perm], lower=True, unit_diagonal=True
        )
        step = scipy.linalg.solve_banded((1, 1), self._banded, step)
        step = scipy.linalg.solve_triangular(
            self._lower.T, step, lower=False, unit_diagonal=True
        )
        solution = np.empty_like(step)
        solution[self._perm] = step

        if not np.all(np.isfinite(solution)):
            raise SingularFactorizationError("non-finite solution", self.order)
        residual = self._matrix @ solution - rhs
        scale = self._norm * float(np.linalg.norm(solution)) + float(np.linalg.norm(rhs))
        backward_error = float(np.linalg.norm(residual)) / scale if scale > 0 else 0.0
        if backward_error > BACKWARD_ERROR_LIMIT:
            raise SingularFactorizationError(
                f"backward error {backward_error:.3e} exceeds {BACKWARD_ERROR_LIMIT:.0e}",
                self.order,
                backward_error,
            )
        logger.debug(f"solved order-{self.order} system, backward error {backward_error:.2e}")
        return solution
