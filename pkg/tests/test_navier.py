"""
Tests for Navier traction forms, boundary lifting and boundary-condition families
"""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from config import InvalidArgumentError
from shell import (
    BoundaryData,
    ShellGeometry,
    Side,
    boundary_condition_residuals,
    lift_boundary_data,
    lifted_field,
    lifting_matrix,
    manufactured_rotational,
    navier_residual,
    navier_traction,
    random_rotational_tangent,
    random_shell_field,
    rigid_rotation,
)
from spectral import synthesize_tangent


class TestTraction:
    @pytest.mark.parametrize("side", list(Side))
    def test_forms_agree_on_manufactured_family(self, geometry, rng, side):
        u = manufactured_rotational(geometry, random_rotational_tangent(rng, geometry.lmax), power=1)
        assert navier_traction(u, side).max_discrepancy() < 1e-9 * max(1.0, u.max_abs())

    @pytest.mark.parametrize("side", list(Side))
    def test_forms_agree_on_zero_flux_field(self, geometry, side):
        u = random_shell_field(geometry, seed=11, zero_flux=True)
        assert navier_traction(u, side).max_discrepancy() < 1e-9 * max(1.0, u.max_abs())

    def test_manufactured_family_is_traction_free(self, geometry, rng):
        u = manufactured_rotational(geometry, random_rotational_tangent(rng, geometry.lmax), power=1)
        forms = navier_traction(u, Side.OUTER)
        assert forms.form_a.max_abs() < 1e-10 * max(1.0, u.max_abs())

    def test_rigid_rotation(self, geometry):
        for side in Side:
            assert navier_traction(rigid_rotation(geometry), side).direct.l2_norm() < 1e-10

    def test_normal_flux_rejected(self, geometry):
        with pytest.raises(InvalidArgumentError, match="normal flux"):
            navier_traction(random_shell_field(geometry, seed=1), Side.OUTER)


class TestLifting:
    def test_matrix_without_slip(self):
        matrix = lifting_matrix(0.5, 0.0)
        a, b = np.linalg.solve(matrix, np.array([1.0, 1.0]))
        assert a == pytest.approx(1.0)
        assert b == pytest.approx(0.75)

    def test_matrix_determinant(self):
        assert np.linalg.det(lifting_matrix(0.25, 1.0)) == pytest.approx(6.6)

    def test_negative_slip_rejected(self, grid):
        zero = synthesize_tangent(random_rotational_tangent(np.random.default_rng(0), 4), grid)
        with pytest.raises(InvalidArgumentError, match="nonnegative"):
            BoundaryData(zero, zero, lam=-1.0)

    def test_thickness_checked(self, grid):
        g = synthesize_tangent(random_rotational_tangent(np.random.default_rng(0), 4), grid)
        with pytest.raises(InvalidArgumentError, match="half-thickness"):
            lift_boundary_data(BoundaryData(g, g), 0.5)

    @pytest.mark.parametrize("lam, delta", [(0.0, 0.1), (1.0, 0.25), (10.0, 0.45)])
    def test_lifted_field_meets_boundary_data(self, rng, lam, delta):
        geometry = ShellGeometry.create(delta, 16, 6)
        g_plus = synthesize_tangent(random_rotational_tangent(rng, 6), geometry.grid)
        g_minus = synthesize_tangent(random_rotational_tangent(rng, 6), geometry.grid)
        a, b = lift_boundary_data(BoundaryData(g_plus, g_minus, lam), delta)
        v = lifted_field(geometry, a, b)
        scale = max(1.0, g_plus.max_abs(), g_minus.max_abs())
        assert navier_residual(v, Side.OUTER, lam, g_plus).max_abs() < 1e-8 * scale
        assert navier_residual(v, Side.INNER, lam, g_minus).max_abs() < 1e-8 * scale
        assert_allclose(v.w, 0.0)


class TestBoundaryFamilies:
    def test_navier_family_distinguished(self, geometry, rng):
        u = manufactured_rotational(geometry, random_rotational_tangent(rng, geometry.lmax), power=1)
        residuals = boundary_condition_residuals(u, Side.OUTER)
        scale = u.max_abs()
        assert residuals["navier"] < 1e-9 * scale
        assert residuals["free"] > 1e-3 * scale
        assert residuals["neumann"] > 1e-3 * scale

    def test_constant_profile_meets_neumann_only(self, geometry, rng):
        u = manufactured_rotational(geometry, random_rotational_tangent(rng, geometry.lmax), power=0)
        residuals = boundary_condition_residuals(u, Side.INNER)
        scale = u.max_abs()
        assert residuals["neumann"] < 1e-9 * scale
        assert residuals["navier"] > 1e-3 * scale
