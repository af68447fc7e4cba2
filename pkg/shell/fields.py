"""
Seeded and manufactured shell fields used by the identity checks.
"""
from typing import Optional

import numpy as np

from config import InvalidArgumentError
from spectral import (
    TangentField,
    inverse_laplace_beltrami,
    random_scalar,
    real_harmonic,
    synthesize,
    synthesize_tangent,
)
from .geometry import ShellField, ShellGeometry


def _check_band(geometry: ShellGeometry, lmax_fields: int) -> None:
    if not 1 <= lmax_fields <= geometry.lmax:
        raise InvalidArgumentError(f"field truncation {lmax_fields} must lie in [1, {geometry.lmax}]")


def manufactured_rotational(geometry: ShellGeometry, a: TangentField, power: int = 1) -> ShellField:
    """u = r^power a with w = 0; power = 1 meets homogeneous Navier conditions with λ = 0"""
    _check_band(geometry, a.lmax)
    surface = synthesize_tangent(a, geometry.grid)
    profile = geometry.r() ** power
    return ShellField(geometry, np.zeros(geometry.shape), profile * surface.u_theta, profile * surface.u_phi)


def manufactured_navier_field(geometry: ShellGeometry, a: TangentField, b: Optional[TangentField] = None) -> ShellField:
    """
    u_h = r a + (r − r₋)²(r − r₊)² b, w = 0.

    Divergence-free for rotational a, b, with zero flux and homogeneous Navier
    data (λ = 0) on both spheres.
    """
    u = manufactured_rotational(geometry, a, power=1)
    if b is None:
        return u
    _check_band(geometry, b.lmax)
    r = geometry.r()
    bump = (r - geometry.radii[0]) ** 2 * (r - geometry.radii[-1]) ** 2
    surface = synthesize_tangent(b, geometry.grid)
    return u + ShellField(geometry, np.zeros(geometry.shape), bump * surface.u_theta, bump * surface.u_phi)


def rigid_rotation(geometry: ShellGeometry) -> ShellField:
    """u = r sinθ e_φ, the rotation about the polar axis"""
    # Ψ = −cosθ = −√(4π/3) Y_1^0
    psi = real_harmonic(1, 0, geometry.lmax) * (-np.sqrt(4.0 * np.pi / 3.0))
    return manufactured_rotational(geometry, TangentField.rotational(psi), power=1)


def random_rotational_tangent(rng: np.random.Generator, lmax: int, lmin: int = 1) -> TangentField:
    """Divergence-free tangent field with smooth random stream function"""
    return TangentField.rotational(inverse_laplace_beltrami(random_scalar(rng, lmax, lmin=lmin)))


def random_shell_field(
    geometry: ShellGeometry,
    seed: int,
    lmax_fields: Optional[int] = None,
    radial_degree: int = 3,
    zero_flux: bool = False,
) -> ShellField:
    """
    Band-limited field whose components are polynomials of degree
    radial_degree in x = (r − 1)/δ. With zero_flux the radial component is
    multiplied by (r − 1 + δ)(r − 1 − δ).
    """
    lmax_fields = geometry.lmax if lmax_fields is None else lmax_fields
    _check_band(geometry, lmax_fields)
    if radial_degree < 0 or radial_degree > geometry.nr - 4:
        raise InvalidArgumentError(f"radial degree {radial_degree} needs at most nr − 4 = {geometry.nr - 4}")

    rng = np.random.default_rng(seed)
    x = (geometry.r() - 1.0) / geometry.delta
    field = ShellField.zeros(geometry)
    for k in range(radial_degree + 1):
        w = synthesize(inverse_laplace_beltrami(random_scalar(rng, lmax_fields)), geometry.grid).values
        tangent = TangentField(
            inverse_laplace_beltrami(random_scalar(rng, lmax_fields)),
            inverse_laplace_beltrami(random_scalar(rng, lmax_fields)),
        )
        surface = synthesize_tangent(tangent, geometry.grid)
        profile = x ** k
        field = field + ShellField(geometry, profile * w, profile * surface.u_theta, profile * surface.u_phi)

    if zero_flux:
        r = geometry.r()
        field = ShellField(geometry, field.w * (r - geometry.radii[0]) * (r - geometry.radii[-1]), field.u_theta, field.u_phi)
    return field
