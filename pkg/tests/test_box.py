"""
Tests for the periodic box: transforms, projections and norms
"""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from config import InvalidArgumentError
from solvers import (
    BoxGrid,
    curl_hat,
    divergence_hat,
    dz_hat,
    inner_box,
    kernel_project,
    project_leray_box,
    sobolev_norm_box,
    winf_norm,
    wms_norm,
)
from solvers.box import VOLUME


def random_vector(box, rng):
    return box.forward(rng.standard_normal((3,) + box.physical_shape))


class TestBoxGrid:
    @pytest.mark.parametrize("n", [7, 2])
    def test_invalid_resolution(self, n):
        with pytest.raises(InvalidArgumentError, match="even integer"):
            BoxGrid.create(n)

    def test_cached(self):
        assert BoxGrid.create(16) is BoxGrid.create(16)

    def test_roundtrip(self, box, rng):
        values = rng.standard_normal(box.physical_shape)
        assert_allclose(box.inverse(box.forward(values)), values, atol=1e-13)

    def test_dealias_mask(self, box):
        assert not box.dealias[0, 0, 0]
        assert box.dealias[5, 0, 0]
        assert not box.dealias[6, 0, 0]


class TestOperators:
    def test_leray_kills_gradients(self, box):
        x, y, z = box.coordinates()
        phase = x + 2 * y - z
        gradient = np.stack([-np.sin(phase), -2 * np.sin(phase), np.sin(phase)])
        assert np.abs(project_leray_box(box.forward(gradient), box)).max() < 1e-14

    def test_leray_idempotent_and_solenoidal(self, box, rng):
        projected = project_leray_box(random_vector(box, rng), box)
        assert np.abs(project_leray_box(projected, box) - projected).max() < 1e-13
        assert np.abs(divergence_hat(projected, box)).max() < 1e-12

    def test_curl_is_solenoidal(self, box, rng):
        assert np.abs(divergence_hat(curl_hat(random_vector(box, rng), box), box)).max() < 1e-12

    def test_kernel_split(self, box, rng):
        v = random_vector(box, rng)
        kernel, waves = kernel_project(v, box)
        assert_allclose(kernel + waves, v)
        assert np.abs(dz_hat(kernel, box)).max() == 0.0
        assert np.abs(waves[..., 0]).max() == 0.0

    def test_shape_checked(self, box):
        with pytest.raises(InvalidArgumentError, match="does not match"):
            kernel_project(np.zeros((3, 4, 4, 3)), box)


class TestNorms:
    def test_parseval(self, box):
        x, _, _ = box.coordinates()
        s = box.forward(np.sin(x))
        assert inner_box(s, s, box) == pytest.approx(VOLUME / 2.0)

    def test_sobolev_weight(self, box):
        x, _, _ = box.coordinates()
        s = box.forward(np.sin(x))
        assert sobolev_norm_box(s, 1.0, box) == pytest.approx(np.sqrt(VOLUME))
        assert sobolev_norm_box(s, 0.0, box) == pytest.approx(np.sqrt(VOLUME / 2.0))

    def test_winf(self, box):
        x, _, _ = box.coordinates()
        s = box.forward(np.sin(x))
        assert winf_norm(s, 0, box) == pytest.approx(1.0)
        assert winf_norm(s, 1, box) == pytest.approx(2.0)
        assert winf_norm(s, -1, box) == pytest.approx(winf_norm(s, 0, box))

    def test_lebesgue(self, box):
        x, _, _ = box.coordinates()
        s = box.forward(np.sin(x))
        assert wms_norm(s, 0, 2.0, box) == pytest.approx(np.sqrt(VOLUME / 2.0))

    def test_lebesgue_exponent_checked(self, box):
        with pytest.raises(InvalidArgumentError, match="exponent"):
            wms_norm(np.zeros(box.spectral_shape, dtype=complex), 0, 0.5, box)
