"""
Vector calculus on S²: gradients, divergence/curl, Hodge and Leray
projections, the zonal-mean projector and the Coriolis wave operator L_h.

Tangent fields use the (e_θ, e_φ) frame; ∇_h^⊥ f = e_r × ∇_h f.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np

from config import InvalidArgumentError
from .spharm import (
    GaussGrid,
    SpectralScalar,
    analyze_divcurl,
    build_grid,
    inverse_laplace_beltrami,
    laplace_beltrami,
    scalar_sobolev_norm,
    synthesize_gradient,
)

_DIVERGENCE_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class GridTangent:
    """Tangent field components (u_θ, u_φ) on a Gauss grid"""

    grid: GaussGrid
    u_theta: np.ndarray
    u_phi: np.ndarray

    def __post_init__(self):
        for name, values in (("u_theta", self.u_theta), ("u_phi", self.u_phi)):
            if values.shape != self.grid.shape:
                raise InvalidArgumentError(f"{name} shape {values.shape} != grid {self.grid.shape}")
            if not np.all(np.isfinite(values)):
                raise InvalidArgumentError(f"{name} contains non-finite entries")

    def __add__(self, other: "GridTangent") -> "GridTangent":
        return GridTangent(self.grid, self.u_theta + other.u_theta, self.u_phi + other.u_phi)

    def __sub__(self, other: "GridTangent") -> "GridTangent":
        return GridTangent(self.grid, self.u_theta - other.u_theta, self.u_phi - other.u_phi)

    def __mul__(self, factor) -> "GridTangent":
        return GridTangent(self.grid, self.u_theta * factor, self.u_phi * factor)

    __rmul__ = __mul__

    def cross_radial(self) -> "GridTangent":
        """u × e_r = (u_φ, −u_θ)"""
        return GridTangent(self.grid, self.u_phi, -self.u_theta)

    def l2_norm(self) -> float:
        density = np.abs(self.u_theta) ** 2 + np.abs(self.u_phi) ** 2
        total = np.sum(density * self.grid.weights[:, None]) * (2.0 * np.pi / self.grid.nlon)
        return float(np.sqrt(total))

    def max_abs(self) -> float:
        return float(np.sqrt(np.abs(self.u_theta) ** 2 + np.abs(self.u_phi) ** 2).max())


@dataclass(frozen=True, eq=False)
class TangentField:
    """Hodge pair (Φ, Ψ): u = ∇_h Φ + ∇_h^⊥ Ψ"""

    hodge_phi: SpectralScalar
    hodge_psi: SpectralScalar

    def __post_init__(self):
        if self.hodge_phi.lmax != self.hodge_psi.lmax:
            raise InvalidArgumentError("Hodge potentials must share a truncation")

    @classmethod
    def zeros(cls, lmax: int) -> "TangentField":
        return cls(SpectralScalar.zeros(lmax), SpectralScalar.zeros(lmax))

    @classmethod
    def rotational(cls, psi: SpectralScalar) -> "TangentField":
        return cls(SpectralScalar.zeros(psi.lmax), psi.without_mean())

    @classmethod
    def potential(cls, phi: SpectralScalar) -> "TangentField":
        return cls(phi.without_mean(), SpectralScalar.zeros(phi.lmax))

    @property
    def lmax(self) -> int:
        return self.hodge_psi.lmax

    @property
    def is_divergence_free(self) -> bool:
        scale = max(1.0, float(np.abs(self.hodge_psi.coeffs).max()))
        return float(np.abs(self.hodge_phi.coeffs).max()) <= _DIVERGENCE_TOLERANCE * scale

    def __add__(self, other: "TangentField") -> "TangentField":
        return TangentField(self.hodge_phi + other.hodge_phi, self.hodge_psi + other.hodge_psi)

    def __sub__(self, other: "TangentField") -> "TangentField":
        return TangentField(self.hodge_phi - other.hodge_phi, self.hodge_psi - other.hodge_psi)

    def __mul__(self, factor) -> "TangentField":
        return TangentField(self.hodge_phi * factor, self.hodge_psi * factor)

    __rmul__ = __mul__

    def with_lmax(self, lmax: int) -> "TangentField":
        return TangentField(self.hodge_phi.with_lmax(lmax), self.hodge_psi.with_lmax(lmax))


@lru_cache(maxsize=16)
def product_grid(lmax: int) -> GaussGrid:
    """Grid with one degree of quadrature headroom for products with cosθ"""
    return build_grid(lmax, nlat=lmax + 2)


def _gradient_arrays(coeffs: np.ndarray, grid: GaussGrid, real: bool) -> Tuple[np.ndarray, np.ndarray]:
    d_theta, d_phi = synthesize_gradient(coeffs, grid)
    if real:
        return d_theta.real.copy(), d_phi.real.copy()
    return d_theta, d_phi


def surface_grad(f: SpectralScalar, grid: GaussGrid) -> Tuple[GridTangent, GridTangent]:
    """(∇_h f, ∇_h^⊥ f) on the grid"""
    if f.lmax > grid.lmax:
        raise InvalidArgumentError(f"truncation {f.lmax} exceeds grid capacity {grid.lmax}")
    d_theta, d_phi = _gradient_arrays(f.coeffs, grid, f.real)
    grad = GridTangent(grid, d_theta, d_phi)
    # e_r × (a e_θ + b e_φ) = −b e_θ + a e_φ
    perp = GridTangent(grid, -d_phi, d_theta)
    return grad, perp


def surface_divcurl(u: GridTangent, lmax: int = None) -> Tuple[SpectralScalar, SpectralScalar]:
    """(div_h u, curl_h u) as spectral scalars"""
    grid = u.grid
    lmax = grid.lmax if lmax is None else lmax
    div, curl = analyze_divcurl(u.u_theta, u.u_phi, grid, lmax)
    real = bool(np.isrealobj(u.u_theta) and np.isrealobj(u.u_phi))
    return SpectralScalar(lmax, div, real=real), SpectralScalar(lmax, curl, real=real)


def hodge_decompose(u: GridTangent, lmax: int = None) -> TangentField:
    """Φ = Δ_h^{-1} div_h u, Ψ = Δ_h^{-1} curl_h u"""
    div, curl = surface_divcurl(u, lmax)
    return TangentField(inverse_laplace_beltrami(div), inverse_laplace_beltrami(curl))


def synthesize_tangent(u: TangentField, grid: GaussGrid) -> GridTangent:
    """∇_h Φ + ∇_h^⊥ Ψ on the grid"""
    phi_theta, phi_phi = _gradient_arrays(u.hodge_phi.coeffs, grid, u.hodge_phi.real)
    psi_theta, psi_phi = _gradient_arrays(u.hodge_psi.coeffs, grid, u.hodge_psi.real)
    return GridTangent(grid, phi_theta - psi_phi, phi_phi + psi_theta)


def leray_project(u: TangentField) -> TangentField:
    """P_h u = ∇_h^⊥ Ψ"""
    return TangentField.rotational(u.hodge_psi)


def zonal_project_spectral(u: TangentField) -> TangentField:
    """
    Π_zonal in Hodge form.

    The m = 0 part of u_φ is ∂_θ of the m = 0 stream function; the gradient
    potential contributes only (1/sinθ)∂_φ Φ, which has no m = 0 part.
    """
    return TangentField.rotational(u.hodge_psi.zonal())


def zonal_project(u: TangentField, grid: GaussGrid) -> GridTangent:
    """((1/2π)∫ u·e_φ dφ) e_φ on the grid"""
    return synthesize_tangent(zonal_project_spectral(u), grid)


def apply_Lh(u: TangentField) -> TangentField:
    """
    L_h u = P_h(u × e_r cosθ), evaluated pseudo-spectrally.

    The product is formed on a grid with one extra latitude so the curl
    quadrature stays exact, then truncated back to u.lmax.
    """
    if not u.is_divergence_free:
        raise InvalidArgumentError("L_h is defined on divergence-free fields (Φ must vanish)")
    grid = product_grid(u.lmax)
    field = synthesize_tangent(u, grid).cross_radial()
    cos_theta = grid.mu[:, None]
    product = GridTangent(grid, field.u_theta * cos_theta, field.u_phi * cos_theta)
    return leray_project(hodge_decompose(product, u.lmax))


def vector_sobolev_norm(u: TangentField, alpha: float) -> float:
    """√(‖Φ‖²_{H^{α+1}} + ‖Ψ‖²_{H^{α+1}})"""
    phi = scalar_sobolev_norm(u.hodge_phi.without_mean(), alpha + 1)
    psi = scalar_sobolev_norm(u.hodge_psi.without_mean(), alpha + 1)
    return float(np.hypot(phi, psi))


def tangent_inner(u: TangentField, v: TangentField) -> float:
    """⟨u, v⟩_{L²(S²)} = Σ l(l+1)(Φ_u conj Φ_v + Ψ_u conj Ψ_v)"""
    lmax = max(u.lmax, v.lmax)
    a, b = u.with_lmax(lmax), v.with_lmax(lmax)
    l = np.arange(lmax + 1)[:, None]
    weight = l * (l + 1.0)
    total = np.sum(weight * (a.hodge_phi.coeffs * np.conj(b.hodge_phi.coeffs) + a.hodge_psi.coeffs * np.conj(b.hodge_psi.coeffs)))
    return float(np.real(total))


def hodge_laplacian(u: TangentField) -> TangentField:
    """Δ_h u = ∇_h div_h u + ∇_h^⊥ curl_h u, i.e. (Δ_h Φ, Δ_h Ψ)"""
    return TangentField(laplace_beltrami(u.hodge_phi), laplace_beltrami(u.hodge_psi))
