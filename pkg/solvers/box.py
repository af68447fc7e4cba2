"""
Periodic box [0, 2π)³ in real-FFT layout: wavevectors, Leray projection,
kernel split ξ₃ = 0, and the Sobolev / Lebesgue norms used by the MHD runs.

Coefficients are normalized so that v(x) = Σ v̂(ξ) e^{iξ·x}, i.e.
v̂ = rfftn(v) / n³. Norms use the physical measure of the box.
"""
import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Tuple

import numpy as np
import scipy.fft

from config import InvalidArgumentError

VOLUME = (2.0 * np.pi) ** 3


@dataclass(frozen=True, eq=False)
class BoxGrid:
    """n modes per dimension on the 2π-periodic box"""

    n: int
    xi: np.ndarray = field(repr=False)
    xi_sq: np.ndarray = field(repr=False)
    inverse_xi_sq: np.ndarray = field(repr=False)
    dealias: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @classmethod
    def create(cls, n: int) -> "BoxGrid":
        return _box_grid(int(n))

    @property
    def spectral_shape(self) -> Tuple[int, int, int]:
        return (self.n, self.n, self.n // 2 + 1)

    @property
    def physical_shape(self) -> Tuple[int, int, int]:
        return (self.n, self.n, self.n)

    @property
    def cell_volume(self) -> float:
        return VOLUME / self.n ** 3

    def forward(self, values: np.ndarray) -> np.ndarray:
        return scipy.fft.rfftn(values, axes=(-3, -2, -1)) / self.n ** 3

    def inverse(self, coeffs: np.ndarray) -> np.ndarray:
        return scipy.fft.irfftn(coeffs * self.n ** 3, s=self.physical_shape, axes=(-3, -2, -1))

    def coordinates(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        x = 2.0 * np.pi * np.arange(self.n) / self.n
        return np.meshgrid(x, x, x, indexing="ij")


@lru_cache(maxsize=8)
def _box_grid(n: int) -> BoxGrid:
    if n < 4 or n % 2:
        raise InvalidArgumentError(f"box resolution must be an even integer ≥ 4, got {n}")
    k = scipy.fft.fftfreq(n, 1.0 / n)
    kz = scipy.fft.rfftfreq(n, 1.0 / n)
    xi = np.stack(np.meshgrid(k, k, kz, indexing="ij"))
    xi_sq = np.sum(xi ** 2, axis=0)
    inverse_xi_sq = np.zeros_like(xi_sq)
    nonzero = xi_sq > 0
    inverse_xi_sq[nonzero] = 1.0 / xi_sq[nonzero]
    # 2/3 rule; also drops the Nyquist planes
    dealias = np.all(np.abs(xi) < n / 3.0, axis=0) & nonzero
    weights = np.full(xi_sq.shape, 2.0)
    weights[..., 0] = 1.0
    weights[..., -1] = 1.0
    for array in (xi, xi_sq, inverse_xi_sq, dealias, weights):
        array.setflags(write=False)
    return BoxGrid(n=n, xi=xi, xi_sq=xi_sq, inverse_xi_sq=inverse_xi_sq, dealias=dealias, weights=weights)


def _check(v_hat: np.ndarray, grid: BoxGrid) -> None:
    if v_hat.shape[-3:] != grid.spectral_shape:
        raise InvalidArgumentError(f"coefficient shape {v_hat.shape} does not match box {grid.spectral_shape}")


# --- spectral operators ------------------------------------------------------------


def curl_hat(v_hat: np.ndarray, grid: BoxGrid) -> np.ndarray:
    """iξ × v̂"""
    return 1j * np.cross(grid.xi, v_hat, axis=0)


def dz_hat(v_hat: np.ndarray, grid: BoxGrid) -> np.ndarray:
    return 1j * grid.xi[2] * v_hat


def divergence_hat(v_hat: np.ndarray, grid: BoxGrid) -> np.ndarray:
    return 1j * np.sum(grid.xi * v_hat, axis=0)


def project_leray_box(v_hat: np.ndarray, grid: BoxGrid) -> np.ndarray:
    """v̂ − ξ(ξ·v̂)/|ξ|², with the mean removed"""
    _check(v_hat, grid)
    parallel = np.sum(grid.xi * v_hat, axis=0) * grid.inverse_xi_sq
    projected = v_hat - grid.xi * parallel
    projected[:, 0, 0, 0] = 0.0
    return projected


def kernel_project(v_hat: np.ndarray, grid: BoxGrid) -> Tuple[np.ndarray, np.ndarray]:
    """(ξ₃ = 0 part, ξ₃ ≠ 0 part)"""
    _check(v_hat, grid)
    kernel = np.where(grid.xi[2] == 0, v_hat, 0.0)
    return kernel, v_hat - kernel


def inner_box(a_hat: np.ndarray, b_hat: np.ndarray, grid: BoxGrid) -> float:
    """⟨a, b⟩_{L²} of the real fields by Parseval"""
    return float(VOLUME * np.sum(grid.weights * np.real(a_hat * np.conj(b_hat))))


# --- norms ---------------------------------------------------------------------------


def sobolev_norm_box(v_hat: np.ndarray, sigma: float, grid: BoxGrid) -> float:
    """H^σ norm with weight (1 + |ξ|²)^σ, summed over leading components"""
    _check(v_hat, grid)
    density = np.abs(v_hat) ** 2
    if density.ndim > 3:
        density = density.reshape((-1,) + grid.spectral_shape).sum(axis=0)
    return float(np.sqrt(VOLUME * np.sum(grid.weights * (1.0 + grid.xi_sq) ** sigma * density)))


def _multi_indices(order: int) -> Iterator[Tuple[int, int, int]]:
    for alpha in itertools.product(range(order + 1), repeat=3):
        if sum(alpha) <= order:
            yield alpha


def _derivative_fields(v_hat: np.ndarray, m: int, grid: BoxGrid) -> Iterator[np.ndarray]:
    """|∂^α v| on the grid for every |α| ≤ max(m, 0)"""
    vector = v_hat if v_hat.ndim > 3 else v_hat[None]
    for alpha in _multi_indices(max(int(m), 0)):
        symbol = np.prod([(1j * grid.xi[i]) ** alpha[i] for i in range(3)], axis=0)
        values = grid.inverse(vector * symbol)
        yield np.sqrt(np.sum(values ** 2, axis=0))


def winf_norm(v_hat: np.ndarray, m: int, grid: BoxGrid) -> float:
    """Σ_{|α|≤m} max_x |∂^α v(x)|; negative m is clamped to 0"""
    _check(v_hat, grid)
    return float(sum(magnitude.max() for magnitude in _derivative_fields(v_hat, m, grid)))


def wms_norm(v_hat: np.ndarray, m: int, s: float, grid: BoxGrid) -> float:
    """(Σ_{|α|≤m} ∫|∂^α v|^s dx)^{1/s}; negative m is clamped to 0"""
    _check(v_hat, grid)
    if s < 1:
        raise InvalidArgumentError(f"Lebesgue exponent must be ≥ 1, got {s}")
    total = sum(np.sum(magnitude ** s) for magnitude in _derivative_fields(v_hat, m, grid)) * grid.cell_volume
    return float(total ** (1.0 / s))
