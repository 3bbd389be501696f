"""Symmetric-cone linear algebra kernels for the interior-point solvers."""

from packages.sdplinalg.factorization import SingularFactorizationError, SymmetricIndefiniteFactor
from packages.sdplinalg.scaling import (
    ScalingPoint,
    max_step_to_boundary,
    nt_scaling,
    nt_scaling_from_z,
)
from packages.sdplinalg.svec import LinalgError, h_op, skron, smat, svec, svec_dim

__all__ = [
    "LinalgError",
    "ScalingPoint",
    "SingularFactorizationError",
    "SymmetricIndefiniteFactor",
    "h_op",
    "max_step_to_boundary",
    "nt_scaling",
    "nt_scaling_from_z",
    "skron",
    "smat",
    "svec",
    "svec_dim",
]
