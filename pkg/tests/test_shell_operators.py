"""
Tests for barotropic averaging, shell vector calculus, the Neumann-Leray
projection and the averaged-dynamics identities
"""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from config import NumericFailureError, settings
from shell import (
    ShellField,
    ShellGeometry,
    ShellScalar,
    averaged_divergence_norm,
    averaged_viscosity_residual,
    averaging_commutation_residual,
    barotropic_average,
    barotropic_average_scalar,
    cartesian_gradient,
    curlcurl_average_residual,
    energy_report,
    manufactured_navier_field,
    manufactured_rotational,
    random_rotational_tangent,
    random_shell_field,
    rigid_rotation,
    shell_leray_project,
    shell_vector_calculus,
    vector_laplacian,
)
from spectral import synthesize_tangent


def uniform_x_flow(geometry):
    components = np.zeros((3,) + geometry.shape)
    components[0] = 1.0
    return ShellField.from_cartesian(geometry, components)


class TestAveraging:
    def test_linear_profile(self, geometry, rng):
        a = random_rotational_tangent(rng, geometry.lmax)
        u = manufactured_rotational(geometry, a, power=1)
        expected = (1.25 ** 3 - 0.75 ** 3) / 3.0 / (2.0 * 0.25)
        surface = synthesize_tangent(a, geometry.grid)
        averaged = barotropic_average(u)
        assert_allclose(averaged.u_theta, expected * surface.u_theta, atol=1e-12)
        assert_allclose(averaged.u_phi, expected * surface.u_phi, atol=1e-12)

    def test_scalar_average_of_constant(self, geometry):
        averaged = barotropic_average_scalar(ShellScalar(geometry, np.full(geometry.shape, 3.0)))
        assert_allclose(averaged.values, 3.0)


class TestVectorCalculus:
    def test_rigid_rotation_curl(self, geometry):
        _, curl = shell_vector_calculus(rigid_rotation(geometry))
        components = curl.cartesian()
        assert_allclose(components[0], 0.0, atol=1e-11)
        assert_allclose(components[1], 0.0, atol=1e-11)
        assert_allclose(components[2], 2.0, atol=1e-11)

    def test_rigid_rotation_gradient(self, geometry):
        gradient = cartesian_gradient(rigid_rotation(geometry))
        expected = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
        assert_allclose(gradient, np.broadcast_to(expected[:, :, None, None, None], gradient.shape), atol=1e-11)

    def test_manufactured_field_divergence_free(self, geometry, rng):
        a = random_rotational_tangent(rng, geometry.lmax)
        b = random_rotational_tangent(rng, geometry.lmax)
        div, _ = shell_vector_calculus(manufactured_navier_field(geometry, a, b))
        assert np.abs(div.values).max() < 1e-10

    def test_uniform_flow_divergence_free(self, geometry):
        div, _ = shell_vector_calculus(uniform_x_flow(geometry))
        assert np.abs(div.values).max() < 1e-11

    def test_laplacian_of_linear_field(self, geometry):
        # second Chebyshev derivatives amplify round-off like nr⁴
        laplacian = vector_laplacian(rigid_rotation(geometry))
        assert laplacian.max_abs() < 100 * geometry.nr ** 4 * np.finfo(float).eps


class TestLerayProjection:
    def test_removes_gradient(self, geometry):
        # e_x = ∇x with ∂_r x = e_x·e_r on both spheres
        assert shell_leray_project(uniform_x_flow(geometry)).max_abs() < 1e-9

    def test_idempotent_and_solenoidal(self, geometry):
        u = random_shell_field(geometry, seed=2)
        projected = shell_leray_project(u)
        assert (shell_leray_project(projected) - projected).max_abs() < 1e-7 * u.max_abs()
        div, _ = shell_vector_calculus(projected)
        assert np.abs(div.values).max() < 1e-7 * u.max_abs()
        assert np.abs(projected.w[0]).max() < 1e-9 * u.max_abs()
        assert np.abs(projected.w[-1]).max() < 1e-9 * u.max_abs()

    @pytest.mark.parametrize("seed", range(5))
    def test_random_fields_project_cleanly(self, geometry, seed):
        u = random_shell_field(geometry, seed=seed)
        projected = shell_leray_project(u)
        div, _ = shell_vector_calculus(projected)
        assert np.abs(div.values).max() < 1e-7 * u.max_abs()
        assert np.abs(projected.w[0]).max() < 1e-9 * u.max_abs()
        assert np.abs(projected.w[-1]).max() < 1e-9 * u.max_abs()

    def test_tolerance_enforced(self, geometry, monkeypatch):
        monkeypatch.setattr(settings, "neumann_tolerance", -1.0)
        with pytest.raises(NumericFailureError, match="Neumann"):
            shell_leray_project(random_shell_field(geometry, seed=2))


class TestEnergy:
    def test_rigid_rotation(self, geometry):
        report = energy_report(rigid_rotation(geometry))
        volume = 4.0 * np.pi / 3.0 * (1.25 ** 3 - 0.75 ** 3)
        assert report.energy == pytest.approx((1.25 ** 5 - 0.75 ** 5) / 5.0 * 8.0 * np.pi / 3.0, rel=1e-10)
        assert report.grad_norm_sq == pytest.approx(2.0 * volume, rel=1e-10)
        assert report.stress_norm_sq < 1e-18

    def test_stress_bound(self, geometry):
        for seed in range(3):
            report = energy_report(random_shell_field(geometry, seed=seed))
            assert report.stress_norm_sq <= 4.0 * report.grad_norm_sq * (1 + 1e-12)


class TestAveragedIdentities:
    def test_commutation(self, geometry):
        u = random_shell_field(geometry, seed=7)
        assert averaging_commutation_residual(u) < 1e-5 * u.max_abs()

    def test_incompressibility_reduction(self, geometry):
        u = random_shell_field(geometry, seed=8)
        assert averaged_divergence_norm(shell_leray_project(u)) < 1e-6 * u.max_abs()

    def test_viscosity_identity(self, rng):
        geometry = ShellGeometry.create(0.25, 32, 7)
        a = random_rotational_tangent(rng, 7)
        b = random_rotational_tangent(rng, 7)
        u = manufactured_navier_field(geometry, a, b)
        assert averaged_viscosity_residual(u) < 1e-6 * u.max_abs()

    def test_curlcurl(self, geometry, rng):
        u = manufactured_navier_field(geometry, random_rotational_tangent(rng, 7), random_rotational_tangent(rng, 7))
        assert curlcurl_average_residual(u) < 1e-6 * u.max_abs()

    def test_viscosity_identity_detects_broken_field(self, rng):
        # a field with radial flux is outside the identity's hypotheses
        geometry = ShellGeometry.create(0.25, 32, 7)
        u = random_shell_field(geometry, seed=4)
        assert averaged_viscosity_residual(u) > 1e-3
