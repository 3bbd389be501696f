"""Nesterov-Todd scaling for a pair of positive definite blocks.

Naming: the scaling matrix is ``w_scal`` (W = G G^T) and its inverse factor
``g_inv`` plays the role of D = G^-1 in the linearized complementarity
U dx + F dz = r_c, with U = skron(D, D^-T Z) and F = skron(D X, D^-T).
Constraint-matrix names W and D in the standard form are unrelated.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from packages.sdplinalg.svec import LinalgError, skron

PD_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ScalingPoint:
    """NT scaling of one (X, Z) block pair and its symmetrized-Kronecker operators."""

    w_scal: np.ndarray
    g: np.ndarray
    g_inv: np.ndarray
    u_op: np.ndarray
    f_op: np.ndarray
    hessian: np.ndarray  # F^-1 U, equal to skron(W^-1, W^-1)
    scaled_point: np.ndarray  # G Z G = G^-1 X G^-1


def _checked_eigh(mat: np.ndarray, name: str) -> tuple[np.ndarray, np.ndarray]:
    mat = 0.5 * (mat + mat.T)
    vals, vecs = np.linalg.eigh(mat)
    top = float(np.max(np.abs(vals))) if vals.size else 0.0
    if vals.size and vals[0] <= PD_TOLERANCE * top:
        raise LinalgError(f"{name} is not positive definite (min eigenvalue {vals[0]:.3e})")
    return vals, vecs


def _spd_power(vals: np.ndarray, vecs: np.ndarray, power: float) -> np.ndarray:
    out = (vecs * vals**power) @ vecs.T
    return 0.5 * (out + out.T)


def nt_scaling(x: np.ndarray, z: np.ndarray) -> ScalingPoint:
    """
    Compute the NT scaling point W = X^1/2 (X^1/2 Z X^1/2)^-1/2 X^1/2.

    Args:
        x: Primal block, symmetric positive definite
        z: Dual block, symmetric positive definite

    Returns:
        ScalingPoint with W = G G^T (G the symmetric square root of W),
        G^-1, the U/F operators and the symmetric Hessian block F^-1 U

    Raises:
        LinalgError: If x or z is not positive definite (names the matrix)
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if x.shape != z.shape:
        raise LinalgError(f"nt_scaling order mismatch: {x.shape} vs {z.shape}")
    x_vals, x_vecs = _checked_eigh(x, "X")
    _checked_eigh(z, "Z")

    x_half = _spd_power(x_vals, x_vecs, 0.5)
    inner_vals, inner_vecs = _checked_eigh(x_half @ z @ x_half, "X^1/2 Z X^1/2")
    w_scal = x_half @ _spd_power(inner_vals, inner_vecs, -0.5) @ x_half
    w_scal = 0.5 * (w_scal + w_scal.T)

    w_vals, w_vecs = _checked_eigh(w_scal, "W")
    g = _spd_power(w_vals, w_vecs, 0.5)
    g_inv = _spd_power(w_vals, w_vecs, -0.5)
    w_inv = _spd_power(w_vals, w_vecs, -1.0)

    # D = G^-1 and D^-T = G because G is symmetric.
    u_op = skron(g_inv, g @ z)
    f_op = skron(g_inv @ x, g)
    hessian = skron(w_inv, w_inv)
    scaled = g @ z @ g
    return ScalingPoint(
        w_scal=w_scal,
        g=g,
        g_inv=g_inv,
        u_op=u_op,
        f_op=f_op,
        hessian=0.5 * (hessian + hessian.T),
        scaled_point=0.5 * (scaled + scaled.T),
    )


def nt_scaling_from_z(x: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Second expression of the NT scaling: Z^-1/2 (Z^1/2 X Z^1/2)^1/2 Z^-1/2."""
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    _checked_eigh(x, "X")
    z_vals, z_vecs = _checked_eigh(z, "Z")
    z_half = _spd_power(z_vals, z_vecs, 0.5)
    z_neg_half = _spd_power(z_vals, z_vecs, -0.5)
    inner_vals, inner_vecs = _checked_eigh(z_half @ x @ z_half, "Z^1/2 X Z^1/2")
    w_scal = z_neg_half @ _spd_power(inner_vals, inner_vecs, 0.5) @ z_neg_half
    return 0.5 * (w_scal + w_scal.T)


def max_step_to_boundary(x: np.ndarray, dx: np.ndarray) -> float:
    """
    Largest t >= 0 with X + t dX positive semidefinite.

    Solved as the generalized eigenproblem (-dX) v = lam X v: the boundary is
    hit at t = 1 / lam_max when lam_max > 0, never otherwise.

    Returns:
        Step bound, math.inf when the direction never reaches the boundary
    """
    x = np.asarray(x, dtype=float)
    dx = np.asarray(dx, dtype=float)
    vals = scipy.linalg.eigh(-0.5 * (dx + dx.T), 0.5 * (x + x.T), eigvals_only=True)
    top = float(vals[-1])
    if top <= 0.0:
        return math.inf
    return 1.0 / top
