"""
Tests for the spherical-harmonic transform engine and spectral norms
"""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from config import InvalidArgumentError
from spectral import (
    GridScalar,
    SpectralScalar,
    analyze,
    build_grid,
    fractional_laplacian,
    grid_integral,
    inverse_laplace_beltrami,
    l2_inner,
    laplace_beltrami,
    random_scalar,
    real_harmonic,
    scalar_sobolev_norm,
    sobolev_interpolation_gap,
    synthesize,
    synthesize_gradient,
)


class TestGrid:
    def test_invalid_lmax(self):
        with pytest.raises(InvalidArgumentError, match="positive integer"):
            build_grid(0)

    def test_too_few_latitudes(self):
        with pytest.raises(InvalidArgumentError, match="nlat"):
            build_grid(8, nlat=5)

    def test_default_shape(self):
        grid = build_grid(15)
        assert grid.nlat == 16
        assert grid.nlon >= 32
        assert grid.weights.sum() == pytest.approx(2.0)

    def test_quadrature_orthonormality(self):
        assert build_grid(31).orthonormality_residual() < 1e-12

    def test_tables_read_only(self):
        grid = build_grid(7)
        with pytest.raises(ValueError):
            grid.weights[0] = 1.0


class TestTransforms:
    def test_roundtrip(self):
        rng = np.random.default_rng(0)
        grid = build_grid(31)
        f = random_scalar(rng, 31, lmin=0)
        back = analyze(synthesize(f, grid), grid)
        assert_allclose(back.coeffs, f.coeffs, atol=1e-10)

    def test_y10_values(self, grid):
        values = synthesize(real_harmonic(1, 0, 15), grid).values
        expected = np.sqrt(3.0 / (4.0 * np.pi)) * np.cos(grid.colat)[:, None] * np.ones(grid.nlon)
        assert_allclose(values, expected, atol=1e-13)

    def test_gradient_of_y10(self, grid):
        d_theta, d_phi = synthesize_gradient(real_harmonic(1, 0, 15).coeffs, grid)
        expected = -np.sqrt(3.0 / (4.0 * np.pi)) * np.sin(grid.colat)[:, None] * np.ones(grid.nlon)
        assert_allclose(d_theta.real, expected, atol=1e-13)
        assert_allclose(d_phi, 0.0, atol=1e-13)

    @pytest.mark.parametrize("l, m", [(1, 0), (2, 1), (3, -2), (5, 5)])
    def test_real_harmonics_unit_norm(self, grid, l, m):
        values = synthesize(real_harmonic(l, m, 15), grid).values
        assert np.isrealobj(values)
        assert grid_integral(GridScalar(grid, values ** 2)) == pytest.approx(1.0, abs=1e-12)

    def test_grid_integral_keeps_value_type(self, grid):
        ones = np.ones(grid.shape)
        real = grid_integral(GridScalar(grid, ones))
        assert isinstance(real, float)
        assert real == pytest.approx(4.0 * np.pi, rel=1e-13)
        mixed = grid_integral(GridScalar(grid, ones + 2j * ones))
        assert isinstance(mixed, complex)
        assert mixed == pytest.approx(4.0 * np.pi * (1 + 2j), rel=1e-13)

    def test_l2_inner_matches_quadrature(self, grid, rng):
        f = random_scalar(rng, 7)
        g = random_scalar(rng, 7)
        product = synthesize(f, grid).values * synthesize(g, grid).values
        assert l2_inner(f, g).real == pytest.approx(grid_integral(GridScalar(grid, product)), rel=1e-12)

    def test_synthesize_rejects_truncation_above_grid(self):
        with pytest.raises(InvalidArgumentError, match="exceeds grid capacity"):
            synthesize(SpectralScalar.zeros(10), build_grid(5))

    def test_analyze_rejects_shape_mismatch(self, grid):
        with pytest.raises(InvalidArgumentError):
            analyze(GridScalar(build_grid(7), np.zeros(build_grid(7).shape)), grid)


class TestSpectralScalar:
    def test_shape_checked(self):
        with pytest.raises(InvalidArgumentError, match="shape"):
            SpectralScalar(3, np.zeros((3, 7)))

    def test_from_modes_outside_truncation(self):
        with pytest.raises(InvalidArgumentError, match="outside"):
            SpectralScalar.from_modes({(2, 3): 1.0}, 4)

    def test_with_lmax_pads_and_truncates(self, rng):
        f = random_scalar(rng, 6)
        padded = f.with_lmax(9)
        assert padded[4, -3] == f[4, -3]
        assert padded[8, 2] == 0
        assert_allclose(padded.with_lmax(6).coeffs, f.coeffs)

    def test_zonal_keeps_order_zero(self, rng):
        f = random_scalar(rng, 6).zonal()
        assert f[3, 0] != 0
        assert f[3, 1] == 0


class TestLaplacian:
    def test_eigenvalues(self):
        f = real_harmonic(4, 2, 8)
        assert_allclose(laplace_beltrami(f).coeffs, -20.0 * f.coeffs)

    def test_inverse_on_zero_mean(self, rng):
        f = random_scalar(rng, 10)
        assert_allclose(inverse_laplace_beltrami(laplace_beltrami(f)).coeffs, f.coeffs, atol=1e-14)

    def test_inverse_drops_mean(self):
        f = SpectralScalar.from_modes({(0, 0): 2.0, (1, 0): 1.0}, 3)
        assert inverse_laplace_beltrami(f).mean_coefficient == 0

    def test_fractional_power_composes(self, rng):
        f = random_scalar(rng, 8)
        twice = fractional_laplacian(fractional_laplacian(f, 0.5), 0.5)
        assert_allclose(twice.coeffs, (-laplace_beltrami(f)).coeffs, atol=1e-12)


class TestSobolevNorms:
    def test_mean_rejected_for_nonzero_order(self):
        f = SpectralScalar.from_modes({(0, 0): 1.0, (2, 0): 1.0}, 4)
        with pytest.raises(InvalidArgumentError, match="zero-mean"):
            scalar_sobolev_norm(f, 1.0)

    def test_l2_norm_includes_mean(self):
        f = SpectralScalar.from_modes({(0, 0): 3.0, (2, 0): 4.0}, 4)
        assert scalar_sobolev_norm(f, 0.0) == pytest.approx(5.0)

    def test_single_degree(self):
        f = real_harmonic(3, 1, 6)
        assert scalar_sobolev_norm(f, 1.5) == pytest.approx(12.0 ** 0.75)

    def test_duality_equality_case(self, rng):
        f = random_scalar(rng, 12)
        alpha = 1.5
        g = fractional_laplacian(f, alpha)
        pairing = abs(l2_inner(f, g)) / scalar_sobolev_norm(g, -alpha)
        assert pairing == pytest.approx(scalar_sobolev_norm(f, alpha), rel=1e-10)

    def test_interpolation_gap_nonnegative(self, rng):
        for seed in range(5):
            f = random_scalar(np.random.default_rng(seed), 10)
            assert sobolev_interpolation_gap(f, 0.5, -1.0, 2.0) >= -1e-12

    def test_interpolation_range_checked(self, rng):
        with pytest.raises(InvalidArgumentError):
            sobolev_interpolation_gap(random_scalar(rng, 4), 3.0, 0.0, 1.0)
