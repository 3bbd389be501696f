"""Unit tests for Nesterov-Todd scaling and boundary step lengths."""

import math

import numpy as np
import pytest

from packages.sdplinalg.scaling import max_step_to_boundary, nt_scaling, nt_scaling_from_z
from packages.sdplinalg.svec import LinalgError, skron


def random_spd(rng, n: int) -> np.ndarray:
    a = rng.standard_normal((n, n))
    return a @ a.T + n * np.eye(n)


def test_nt_scaling_maps_z_to_x(rng):
    """Test the defining property W Z W = X."""
    x, z = random_spd(rng, 4), random_spd(rng, 4)

    w = nt_scaling(x, z).w_scal

    assert np.linalg.norm(w @ z @ w - x) / np.linalg.norm(x) <= 1e-9


def test_nt_scaling_two_expressions_agree(rng):
    """Test that the X-based and Z-based formulas give the same W."""
    x, z = random_spd(rng, 3), random_spd(rng, 3)

    np.testing.assert_allclose(nt_scaling(x, z).w_scal, nt_scaling_from_z(x, z), rtol=1e-9)


def test_nt_scaling_factor_squares_to_w(rng):
    """Test W = G G and G G^-1 = I."""
    point = nt_scaling(random_spd(rng, 3), random_spd(rng, 3))

    np.testing.assert_allclose(point.g @ point.g, point.w_scal, atol=1e-12)
    np.testing.assert_allclose(point.g @ point.g_inv, np.eye(3), atol=1e-12)


def test_nt_hessian_equals_f_inverse_u(rng):
    """Test F^-1 U = skron(W^-1, W^-1), which makes the Hessian symmetric."""
    point = nt_scaling(random_spd(rng, 3), random_spd(rng, 3))
    w_inv = np.linalg.inv(point.w_scal)

    np.testing.assert_allclose(
        np.linalg.solve(point.f_op, point.u_op), skron(w_inv, w_inv), atol=1e-10
    )
    np.testing.assert_allclose(point.hessian, point.hessian.T, atol=1e-15)


def test_nt_scaling_at_identity():
    """Test that X = Z = I scales to W = I."""
    point = nt_scaling(np.eye(2), np.eye(2))

    np.testing.assert_allclose(point.w_scal, np.eye(2), atol=1e-15)
    np.testing.assert_allclose(point.scaled_point, np.eye(2), atol=1e-15)


def test_nt_scaling_rejects_indefinite():
    """Test that an indefinite X is reported by name."""
    with pytest.raises(LinalgError, match="X is not positive definite"):
        nt_scaling(np.diag([1.0, -1.0]), np.eye(2))


def test_nt_scaling_rejects_singular_z():
    """Test that a singular Z is reported by name."""
    with pytest.raises(LinalgError, match="Z is not positive definite"):
        nt_scaling(np.eye(2), np.diag([1.0, 0.0]))


def test_max_step_reaches_boundary():
    """Test X = I, dX = -2I hits the boundary at t = 0.5."""
    assert max_step_to_boundary(np.eye(3), -2.0 * np.eye(3)) == pytest.approx(0.5)


def test_max_step_uses_generalized_eigenvalue():
    """Test X = diag(1, 2), dX = diag(-2, -1) is limited by the first entry."""
    assert max_step_to_boundary(np.diag([1.0, 2.0]), np.diag([-2.0, -1.0])) == pytest.approx(0.5)


def test_max_step_unbounded_direction():
    """Test that a PSD direction never reaches the boundary."""
    assert max_step_to_boundary(np.eye(2), np.eye(2)) == math.inf
