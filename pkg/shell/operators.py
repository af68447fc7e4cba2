"""
Shell operators: barotropic averaging, 3D vector calculus through the
spherical-harmonic / Chebyshev split, the Neumann-Leray projection, and the
averaged-dynamics identities that connect the shell to S².
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from config import NumericFailureError, settings
from spectral import (
    GridScalar,
    GridTangent,
    TangentField,
    analyze_divcurl,
    analyze_values,
    hodge_decompose,
    hodge_laplacian,
    leray_project,
    synthesize_coeffs,
    synthesize_gradient,
    synthesize_tangent,
    vector_sobolev_norm,
)
from .geometry import ShellField, ShellGeometry, ShellScalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnergyReport:
    energy: float
    grad_norm_sq: float
    stress_norm_sq: float


# --- spectral helpers on radial stacks ----------------------------------------


def _synth(geometry: ShellGeometry, coeffs: np.ndarray) -> np.ndarray:
    return synthesize_coeffs(coeffs, geometry.grid).real


def _grad(geometry: ShellGeometry, coeffs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    d_theta, d_phi = synthesize_gradient(coeffs, geometry.grid)
    return d_theta.real, d_phi.real


def _degrees(geometry: ShellGeometry) -> np.ndarray:
    l = np.arange(geometry.work_lmax + 1, dtype=float)
    return (l * (l + 1.0))[:, None]


def _d_dr_axis(geometry: ShellGeometry, values: np.ndarray, axis: int) -> np.ndarray:
    moved = np.moveaxis(values, axis, 0)
    return np.moveaxis(geometry.d_dr(moved), 0, axis)


# --- averaging ----------------------------------------------------------------


def barotropic_average(u: ShellField) -> GridTangent:
    """ū = (1/2δ) ∫ r u_h dr"""
    geometry = u.geometry
    r = geometry.r()
    scale = 1.0 / (2.0 * geometry.delta)
    return GridTangent(
        geometry.grid,
        scale * geometry.integrate_r(r * u.u_theta),
        scale * geometry.integrate_r(r * u.u_phi),
    )


def barotropic_average_scalar(f: ShellScalar) -> GridScalar:
    """f̄ = (1/2δ) ∫ f dr"""
    geometry = f.geometry
    return GridScalar(geometry.grid, geometry.integrate_r(f.values) / (2.0 * geometry.delta))


# --- vector calculus ----------------------------------------------------------


def shell_vector_calculus(u: ShellField) -> Tuple[ShellScalar, ShellField]:
    """
    div u = r⁻²∂_r(r² w) + r⁻¹ div_h u_h
    curl u = r⁻¹(curl_h u_h) e_r + r⁻¹(∇_h w − ∂_r(r u_h)) × e_r
    """
    geometry = u.geometry
    r = geometry.r()
    div_h, curl_h = analyze_divcurl(u.u_theta, u.u_phi, geometry.grid)
    div = geometry.d_dr(r ** 2 * u.w) / r ** 2 + _synth(geometry, div_h) / r

    grad_w_theta, grad_w_phi = _grad(geometry, analyze_values(u.w, geometry.grid))
    v_theta = grad_w_theta - geometry.d_dr(r * u.u_theta)
    v_phi = grad_w_phi - geometry.d_dr(r * u.u_phi)
    curl = ShellField(geometry, _synth(geometry, curl_h) / r, v_phi / r, -v_theta / r)
    return ShellScalar(geometry, div), curl


def cartesian_gradient(u: ShellField) -> np.ndarray:
    """∂_j u_i as a (3, 3, nr, nlat, nlon) array, by the chain rule in (r, θ, φ)"""
    geometry = u.geometry
    r = geometry.r()
    components = u.cartesian()
    d_theta, d_phi = _grad(geometry, analyze_values(components, geometry.grid))
    d_r = _d_dr_axis(geometry, components, axis=1)
    e_r, e_theta, e_phi = geometry.basis()
    return (
        e_r[None, :, None] * d_r[:, None]
        + e_theta[None, :, None] * (d_theta / r)[:, None]
        + e_phi[None, :, None] * (d_phi / r)[:, None]
    )


def vector_laplacian(u: ShellField) -> ShellField:
    """Componentwise Cartesian Laplacian: r⁻²∂_r(r²∂_r g) + r⁻²Δ_h g"""
    geometry = u.geometry
    r = geometry.r()
    components = u.cartesian()
    coeffs = analyze_values(components, geometry.grid)
    angular = _synth(geometry, -_degrees(geometry) * coeffs)
    radial = _d_dr_axis(geometry, r ** 2 * _d_dr_axis(geometry, components, axis=1), axis=1)
    return ShellField.from_cartesian(geometry, (radial + angular) / r ** 2)


# --- Leray projection -----------------------------------------------------------


def _backward_error(residual_sq: float, operator_norm: float, solution_sq: float, rhs_sq: float) -> float:
    """
    Normwise backward error ‖Ax − b‖ / (‖A‖‖x‖ + ‖b‖) of the whole
    block-diagonal system, from per-block sums of squares
    """
    scale = operator_norm * np.sqrt(solution_sq) + np.sqrt(rhs_sq)
    if scale == 0.0:
        return 0.0
    return float(np.sqrt(residual_sq) / scale)


def neumann_potential(u: ShellField) -> np.ndarray:
    """
    Coefficients f_lm(r) of the Neumann potential: Δf = div u in Ω,
    ∂_r f = w on both spheres, ∫_Ω f = 0.

    Each (l, m) gives the two-point problem (r² f')' − l(l+1) f = r² div_lm,
    solved by Chebyshev collocation with the boundary rows replaced.
    """
    geometry = u.geometry
    grid = geometry.grid
    lmax = geometry.work_lmax
    radii = geometry.radii
    diff = geometry.diff
    r2 = radii[:, None, None] ** 2

    div_h, _ = analyze_divcurl(u.u_theta, u.u_phi, grid)
    w = analyze_values(u.w, grid)
    source = geometry.d_dr(r2 * w) + radii[:, None, None] * div_h

    stiffness = diff @ (radii[:, None] ** 2 * diff)
    gauge = geometry.radial_weights * radii ** 2
    potential = np.zeros_like(w)
    # the l = 0 block carries round-off-sized data for most fields, so the
    # residual is measured against the full system rather than per block
    residual_sq = solution_sq = rhs_sq = operator_norm = 0.0
    for l in range(lmax + 1):
        orders = slice(lmax - l, lmax + l + 1)
        operator = stiffness - l * (l + 1.0) * np.eye(geometry.nr)
        operator[0], operator[-1] = diff[0], diff[-1]
        rhs = source[:, l, orders].copy()
        rhs[0], rhs[-1] = w[0, l, orders], w[-1, l, orders]
        if l == 0:
            system = np.vstack([operator, gauge])
            target = np.vstack([rhs, np.zeros((1, rhs.shape[1]))])
            solution = np.linalg.lstsq(system, target, rcond=None)[0]
        else:
            system, target = operator, rhs
            solution = np.linalg.solve(operator, rhs)
        residual_sq += float(np.sum(np.abs(system @ solution - target) ** 2))
        solution_sq += float(np.sum(np.abs(solution) ** 2))
        rhs_sq += float(np.sum(np.abs(target) ** 2))
        operator_norm = max(operator_norm, float(np.linalg.norm(system, 2)))
        potential[:, l, orders] = solution

    worst = _backward_error(residual_sq, operator_norm, solution_sq, rhs_sq)
    logger.debug("Neumann solve backward error %.3e", worst)
    if worst > settings.neumann_tolerance:
        raise NumericFailureError("Neumann potential solve did not converge", residual=worst)
    return potential


def shell_leray_project(u: ShellField) -> ShellField:
    """P u = u − ∇f"""
    geometry = u.geometry
    r = geometry.r()
    potential = neumann_potential(u)
    d_theta, d_phi = _grad(geometry, potential)
    gradient = ShellField(geometry, geometry.d_dr(_synth(geometry, potential)), d_theta / r, d_phi / r)
    return u - gradient


# --- energy functionals ------------------------------------------------------------


def energy_report(u: ShellField) -> EnergyReport:
    """‖u‖², ‖∇u‖² and ‖S‖² with S = ∇u + ∇uᵀ, by shell quadrature"""
    geometry = u.geometry
    gradient = cartesian_gradient(u)
    stress = gradient + np.swapaxes(gradient, 0, 1)
    return EnergyReport(
        energy=geometry.volume_integral(u.w ** 2 + u.u_theta ** 2 + u.u_phi ** 2),
        grad_norm_sq=geometry.volume_integral(np.sum(gradient ** 2, axis=(0, 1))),
        stress_norm_sq=geometry.volume_integral(np.sum(stress ** 2, axis=(0, 1))),
    )


# --- averaged identities -------------------------------------------------------------


def _rotational_part(field: GridTangent, lmax: int) -> TangentField:
    return leray_project(hodge_decompose(field, lmax))


def averaging_commutation_residual(u: ShellField) -> float:
    """‖avg(P u) − P_h(avg u)‖_{L²(S²)}"""
    geometry = u.geometry
    averaged_projection = barotropic_average(shell_leray_project(u))
    projected_average = synthesize_tangent(_rotational_part(barotropic_average(u), geometry.work_lmax), geometry.grid)
    return (averaged_projection - projected_average).l2_norm()


def averaged_viscosity_residual(u: ShellField) -> float:
    """‖P_h avg(Δu) − P_h Δ_h avg(r⁻²u_h) − 2 P_h avg(r⁻¹∂_r u)‖_{L²(S²)}"""
    geometry = u.geometry
    lmax = geometry.work_lmax
    r = geometry.r()
    laplacian = vector_laplacian(u)
    lhs = _rotational_part(barotropic_average(laplacian), lmax)

    scaled = ShellField(geometry, u.w / r ** 2, u.u_theta / r ** 2, u.u_phi / r ** 2)
    viscous = hodge_laplacian(_rotational_part(barotropic_average(scaled), lmax))

    radial_derivative = ShellField(
        geometry,
        geometry.d_dr(u.w) / r,
        geometry.d_dr(u.u_theta) / r,
        geometry.d_dr(u.u_phi) / r,
    )
    curvature = _rotational_part(barotropic_average(radial_derivative), lmax)
    return vector_sobolev_norm(lhs - viscous - 2.0 * curvature, 0.0)


def curlcurl_average_residual(u: ShellField) -> float:
    """‖avg(Δu) + avg(curl curl u)‖_{L²(S²)}; vanishes for divergence-free u"""
    _, curl = shell_vector_calculus(u)
    _, curl_curl = shell_vector_calculus(curl)
    return (barotropic_average(vector_laplacian(u)) + barotropic_average(curl_curl)).l2_norm()


def averaged_divergence_norm(u: ShellField) -> float:
    """‖div_h ū‖_{L²(S²)}"""
    geometry = u.geometry
    averaged = barotropic_average(u)
    div, _ = analyze_divcurl(averaged.u_theta, averaged.u_phi, geometry.grid)
    return float(np.sqrt(np.sum(np.abs(div) ** 2)))
