"""
Navier boundary conditions on the shell: the three equivalent traction forms,
boundary-data lifting v = r²a + b, and residuals for the boundary-condition
families (Navier, free, Neumann-type).
"""
import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from config import InvalidArgumentError
from spectral import GridTangent
from .geometry import ShellField, ShellGeometry, Side
from .operators import cartesian_gradient, shell_vector_calculus

logger = logging.getLogger(__name__)

_FLUX_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class BoundaryData:
    """Shear data g± on r = 1 ± δ with slip coefficient λ"""

    g_plus: GridTangent
    g_minus: GridTangent
    lam: float = 0.0

    def __post_init__(self):
        if self.lam < 0:
            raise InvalidArgumentError(f"slip coefficient must be nonnegative, got {self.lam}")
        if self.g_plus.grid is not self.g_minus.grid:
            raise InvalidArgumentError("boundary data must live on a common grid")


@dataclass(frozen=True, eq=False)
class TractionForms:
    form_a: GridTangent
    form_b: GridTangent
    direct: GridTangent

    def max_discrepancy(self) -> float:
        return max(
            (self.form_a - self.form_b).max_abs(),
            (self.form_a - self.direct).max_abs(),
            (self.form_b - self.direct).max_abs(),
        )


def _check_zero_flux(u: ShellField, index: int) -> None:
    flux = float(np.abs(u.w[index]).max())
    if flux > _FLUX_TOLERANCE * max(1.0, u.max_abs()):
        raise InvalidArgumentError(f"normal flux u·n = {flux:.3e} on the boundary; traction identities need u·n = 0")


def _direct_traction(u: ShellField, index: int, sign: float) -> GridTangent:
    """[S n]_tan with S = ∇u + ∇uᵀ and n = ±e_r"""
    gradient = cartesian_gradient(u)[:, :, index]
    stress = gradient + np.swapaxes(gradient, 0, 1)
    e_r, e_theta, e_phi = u.geometry.basis()
    normal_stress = sign * np.einsum("ij...,j...->i...", stress, e_r)
    return GridTangent(
        u.geometry.grid,
        np.einsum("i...,i...->...", normal_stress, e_theta),
        np.einsum("i...,i...->...", normal_stress, e_phi),
    )


def navier_traction(u: ShellField, side: Side) -> TractionForms:
    """
    Tangential traction on one boundary sphere, three ways:

    form_a = ±(∂_r u_h − u_h / r)
    form_b = (curl u) × n ∓ 2 u_h / r
    direct = [S n]_tan

    The forms agree whenever u·n = 0 on that sphere.
    """
    geometry = u.geometry
    index = geometry.boundary_index(side)
    sign = geometry.boundary_sign(side)
    _check_zero_flux(u, index)
    radius = geometry.radii[index]

    form_a = GridTangent(
        geometry.grid,
        sign * (geometry.d_dr(u.u_theta)[index] - u.u_theta[index] / radius),
        sign * (geometry.d_dr(u.u_phi)[index] - u.u_phi[index] / radius),
    )

    _, curl = shell_vector_calculus(u)
    form_b = GridTangent(
        geometry.grid,
        sign * (curl.u_phi[index] - 2.0 * u.u_theta[index] / radius),
        sign * (-curl.u_theta[index] - 2.0 * u.u_phi[index] / radius),
    )

    return TractionForms(form_a, form_b, _direct_traction(u, index, sign))


def lifting_matrix(delta: float, lam: float) -> np.ndarray:
    """
    Rows (outer, inner) of the 2×2 system for (a, b) in v = r²a + b:
    (r + λr²) a + (λ − 1/r) b = g₊ at r = 1 + δ
    (λr² − r) a + (λ + 1/r) b = g₋ at r = 1 − δ
    """
    outer, inner = 1.0 + delta, 1.0 - delta
    return np.array([
        [outer + lam * outer ** 2, lam - 1.0 / outer],
        [lam * inner ** 2 - inner, lam + 1.0 / inner],
    ])


def lift_boundary_data(bd: BoundaryData, delta: float) -> Tuple[GridTangent, GridTangent]:
    """Surface fields (a, b) with v = r²a + b meeting [S_v n + λv]_tan = g± and v·n = 0"""
    if not 0.0 < delta < 0.5:
        raise InvalidArgumentError(f"shell half-thickness must lie in (0, 1/2), got {delta}")
    matrix = lifting_matrix(delta, bd.lam)
    logger.debug("lifting determinant %.6g (delta=%g, lam=%g)", np.linalg.det(matrix), delta, bd.lam)
    grid = bd.g_plus.grid
    rhs = np.stack([
        np.stack([bd.g_plus.u_theta, bd.g_plus.u_phi]),
        np.stack([bd.g_minus.u_theta, bd.g_minus.u_phi]),
    ]).reshape(2, -1)
    a, b = np.linalg.solve(matrix, rhs).reshape((2, 2) + grid.shape)
    return GridTangent(grid, a[0], a[1]), GridTangent(grid, b[0], b[1])


def lifted_field(geometry: ShellGeometry, a: GridTangent, b: GridTangent) -> ShellField:
    """v = r² a + b with w = 0"""
    r = geometry.r()
    return ShellField(
        geometry,
        np.zeros(geometry.shape),
        r ** 2 * a.u_theta + b.u_theta,
        r ** 2 * a.u_phi + b.u_phi,
    )


def navier_residual(u: ShellField, side: Side, lam: float, g: GridTangent) -> GridTangent:
    """[S n + λu]_tan − g on one boundary sphere"""
    geometry = u.geometry
    index = geometry.boundary_index(side)
    _check_zero_flux(u, index)
    traction = _direct_traction(u, index, geometry.boundary_sign(side))
    return traction + lam * u.horizontal(index) - g


def boundary_condition_residuals(u: ShellField, side: Side, lam: float = 0.0) -> Dict[str, float]:
    """
    L²(S²) residuals of the homogeneous boundary-condition families on one
    sphere: navier [S n + λu]_tan, free (curl u) × n, neumann ∂_r u_h.
    """
    geometry = u.geometry
    index = geometry.boundary_index(side)
    sign = geometry.boundary_sign(side)
    zero = GridTangent(geometry.grid, np.zeros(geometry.grid.shape), np.zeros(geometry.grid.shape))
    _, curl = shell_vector_calculus(u)
    free = GridTangent(geometry.grid, sign * curl.u_phi[index], -sign * curl.u_theta[index])
    neumann = GridTangent(geometry.grid, geometry.d_dr(u.u_theta)[index], geometry.d_dr(u.u_phi)[index])
    return {
        "navier": navier_residual(u, side, lam, zero).l2_norm(),
        "free": free.l2_norm(),
        "neumann": neumann.l2_norm(),
    }
