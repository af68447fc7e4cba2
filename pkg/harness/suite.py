"""
Property and identity suites behind `rotwave verify` and `rotwave identities`.

Every check returns a CheckResult instead of raising, so a run reports all
failures at once; the CLI turns any failure into AssertionFailure.
"""
import logging
from typing import Callable, Dict, List, Optional

import numpy as np

from config import InvalidArgumentError, settings
from shell import (
    BoundaryData,
    ShellGeometry,
    Side,
    averaged_divergence_norm,
    averaged_viscosity_residual,
    averaging_commutation_residual,
    boundary_condition_residuals,
    curlcurl_average_residual,
    energy_report,
    lift_boundary_data,
    lifted_field,
    manufactured_navier_field,
    manufactured_rotational,
    navier_residual,
    navier_traction,
    random_rotational_tangent,
    random_shell_field,
    rigid_rotation,
    shell_leray_project,
)
from solvers import (
    BoxGrid,
    MhdRunConfig,
    SphereRunConfig,
    anisotropic_norm_checks,
    gaussian_sample,
    kernel_project,
    nash_ratio,
    project_leray_box,
    run_accumulate,
    run_mhd,
    wave_mode_matrix,
    wave_operator,
)
from spectral import (
    analyze,
    apply_Lh,
    build_grid,
    fractional_laplacian,
    l2_inner,
    random_scalar,
    scalar_sobolev_norm,
    synthesize,
    synthesize_tangent,
    tangent_inner,
    zonal_project_spectral,
)
from .fitting import fit_slope
from .models import CheckResult, IdentityConfig

logger = logging.getLogger(__name__)

# refined residuals this far below tolerance count as converged
_REFINEMENT_FLOOR = 1e-2
_REFINEMENT_SAMPLES = 5
_REFINEMENT_RATIO = 4.0
_DISTINCTION_FLOOR = 1e-3
_ROUNDOFF = 1e-10
_GAUSSIAN_RATIO = np.sqrt(2.0 / np.pi)


def _below(module: str, name: str, value: float, threshold: float, detail: str = "") -> CheckResult:
    return CheckResult(module=module, name=name, passed=bool(value < threshold), value=float(value), threshold=threshold, detail=detail)


def _at_least(module: str, name: str, value: float, threshold: float, detail: str = "") -> CheckResult:
    return CheckResult(module=module, name=name, passed=bool(value >= threshold), value=float(value), threshold=threshold, detail=detail)


def _scaled(residual: float, scale: float) -> float:
    return residual / max(1.0, scale)


# --- shell identities -------------------------------------------------------------


def _commutation_worst(geometry: ShellGeometry, cfg: IdentityConfig, samples: int) -> float:
    worst = 0.0
    for i in range(samples):
        u = random_shell_field(geometry, cfg.seed + i, lmax_fields=cfg.lmax, radial_degree=cfg.radial_degree)
        worst = max(worst, _scaled(averaging_commutation_residual(u), u.max_abs()))
    return worst


def _commutation_checks(cfg: IdentityConfig) -> List[CheckResult]:
    geometry = ShellGeometry.create(cfg.delta, cfg.nr, cfg.lmax)
    coarse = _commutation_worst(geometry, cfg, cfg.samples)
    checks = [_below("shell", "averaging_commutation", coarse, cfg.commutation_tolerance, f"{cfg.samples} fields")]
    if cfg.refine:
        samples = min(cfg.samples, _REFINEMENT_SAMPLES)
        coarse_subset = _commutation_worst(geometry, cfg, samples)
        fine_geometry = ShellGeometry.create(cfg.delta, 2 * cfg.nr, 2 * cfg.lmax)
        fine = _commutation_worst(fine_geometry, cfg, samples)
        floor = _REFINEMENT_FLOOR * cfg.commutation_tolerance
        ratio = coarse_subset / fine if fine > 0 else float("inf")
        checks.append(CheckResult(
            module="shell",
            name="averaging_commutation_refinement",
            passed=bool(ratio >= _REFINEMENT_RATIO or fine < floor),
            value=ratio,
            threshold=_REFINEMENT_RATIO,
            detail=f"coarse {coarse_subset:.3e}, refined {fine:.3e}",
        ))
    return checks


def _traction_checks(cfg: IdentityConfig, rng: np.random.Generator) -> List[CheckResult]:
    geometry = ShellGeometry.create(cfg.delta, cfg.nr, cfg.lmax)
    manufactured = worst_generic = 0.0
    for i in range(min(cfg.samples, 10)):
        u = manufactured_rotational(geometry, random_rotational_tangent(rng, cfg.lmax), power=1)
        generic = random_shell_field(geometry, cfg.seed + 1000 + i, lmax_fields=cfg.lmax, radial_degree=cfg.radial_degree, zero_flux=True)
        for side in Side:
            manufactured = max(manufactured, _scaled(navier_traction(u, side).max_discrepancy(), u.max_abs()))
            worst_generic = max(worst_generic, _scaled(navier_traction(generic, side).max_discrepancy(), generic.max_abs()))

    rotation = rigid_rotation(geometry)
    rigid = max(navier_traction(rotation, side).direct.l2_norm() for side in Side)
    return [
        _below("shell", "traction_equivalence_manufactured", manufactured, cfg.traction_tolerance),
        _below("shell", "traction_equivalence_generic", worst_generic, cfg.traction_tolerance),
        _below("shell", "rigid_rotation_traction", rigid, _ROUNDOFF),
    ]


def _viscosity_checks(cfg: IdentityConfig, rng: np.random.Generator) -> List[CheckResult]:
    geometry = ShellGeometry.create(cfg.delta, cfg.viscosity_nr, cfg.lmax)
    viscosity = curlcurl = 0.0
    for _ in range(min(cfg.samples, 10)):
        u = manufactured_navier_field(geometry, random_rotational_tangent(rng, cfg.lmax), random_rotational_tangent(rng, cfg.lmax))
        scale = u.max_abs()
        viscosity = max(viscosity, _scaled(averaged_viscosity_residual(u), scale))
        curlcurl = max(curlcurl, _scaled(curlcurl_average_residual(u), scale))
    return [
        _below("shell", "averaged_viscosity", viscosity, cfg.viscosity_tolerance),
        _below("shell", "curl_curl_average", curlcurl, cfg.viscosity_tolerance),
    ]


def _projection_checks(cfg: IdentityConfig) -> List[CheckResult]:
    geometry = ShellGeometry.create(cfg.delta, cfg.nr, cfg.lmax)
    u = random_shell_field(geometry, cfg.seed, lmax_fields=cfg.lmax, radial_degree=cfg.radial_degree)
    projected = shell_leray_project(u)
    twice = shell_leray_project(projected)
    scale = u.max_abs()
    return [
        _below("shell", "leray_idempotence", _scaled((twice - projected).max_abs(), scale), 1e-7),
        _below("shell", "incompressibility_reduction", _scaled(averaged_divergence_norm(projected), scale), cfg.commutation_tolerance),
    ]


def _lifting_checks(cfg: IdentityConfig, rng: np.random.Generator) -> List[CheckResult]:
    worst = 0.0
    cases = []
    for i in range(cfg.lifting_cases):
        lam = cfg.lifting_lambdas[i % len(cfg.lifting_lambdas)]
        delta = cfg.lifting_deltas[(i // len(cfg.lifting_lambdas)) % len(cfg.lifting_deltas)]
        geometry = ShellGeometry.create(delta, cfg.nr, cfg.lmax)
        g_plus = synthesize_tangent(random_rotational_tangent(rng, cfg.lmax), geometry.grid)
        g_minus = synthesize_tangent(random_rotational_tangent(rng, cfg.lmax), geometry.grid)
        a, b = lift_boundary_data(BoundaryData(g_plus, g_minus, lam), delta)
        v = lifted_field(geometry, a, b)
        scale = max(g_plus.max_abs(), g_minus.max_abs())
        residual = max(
            navier_residual(v, Side.OUTER, lam, g_plus).max_abs(),
            navier_residual(v, Side.INNER, lam, g_minus).max_abs(),
        )
        worst = max(worst, _scaled(residual, scale))
        cases.append(f"(λ={lam:g}, δ={delta:g})")
    return [_below("shell", "boundary_lifting", worst, cfg.lifting_tolerance, f"{len(cases)} cases")]


def _energy_checks(cfg: IdentityConfig) -> List[CheckResult]:
    geometry = ShellGeometry.create(cfg.delta, cfg.nr, cfg.lmax)
    excess = 0.0
    for i in range(min(cfg.samples, 10)):
        report = energy_report(random_shell_field(geometry, cfg.seed + i, lmax_fields=cfg.lmax, radial_degree=cfg.radial_degree))
        excess = max(excess, report.stress_norm_sq / (4.0 * report.grad_norm_sq))
    rotation = energy_report(rigid_rotation(geometry))
    return [
        _below("shell", "stress_bound", excess, 1.0 + _ROUNDOFF, "‖S‖² / 4‖∇u‖²"),
        _below("shell", "rigid_rotation_stress", np.sqrt(rotation.stress_norm_sq), _ROUNDOFF),
    ]


def _distinction_checks(cfg: IdentityConfig, rng: np.random.Generator) -> List[CheckResult]:
    geometry = ShellGeometry.create(cfg.delta, cfg.nr, cfg.lmax)
    u = manufactured_rotational(geometry, random_rotational_tangent(rng, cfg.lmax), power=1)
    residuals = boundary_condition_residuals(u, Side.OUTER, lam=0.0)
    scale = u.max_abs()
    return [
        _below("shell", "navier_family_satisfied", _scaled(residuals["navier"], scale), cfg.traction_tolerance),
        _at_least("shell", "free_family_violated", _scaled(residuals["free"], scale), _DISTINCTION_FLOOR),
        _at_least("shell", "neumann_family_violated", _scaled(residuals["neumann"], scale), _DISTINCTION_FLOOR),
    ]


def run_identities(cfg: IdentityConfig) -> List[CheckResult]:
    """Shell identity checks: averaging, traction, viscosity, lifting and energy"""
    logger.info("shell identities: delta=%g nr=%d lmax=%d samples=%d", cfg.delta, cfg.nr, cfg.lmax, cfg.samples)
    rng = np.random.default_rng(cfg.seed)
    checks: List[CheckResult] = []
    checks += _commutation_checks(cfg)
    checks += _traction_checks(cfg, rng)
    checks += _viscosity_checks(cfg, rng)
    checks += _projection_checks(cfg)
    checks += _lifting_checks(cfg, rng)
    checks += _energy_checks(cfg)
    checks += _distinction_checks(cfg, rng)
    for check in checks:
        logger.info("%s %s: %.3e", "pass" if check.passed else "FAIL", check.name, check.value)
    return checks


# --- property suite ------------------------------------------------------------------------


def _spharm_checks() -> List[CheckResult]:
    rng = np.random.default_rng(0)
    lmax = 31
    grid = build_grid(lmax)
    f = random_scalar(rng, lmax)
    roundtrip = float(np.abs(analyze(synthesize(f, grid), grid).coeffs - f.coeffs).max())

    alpha = 1.5
    dual = fractional_laplacian(f, alpha)
    pairing = abs(l2_inner(f, dual)) / scalar_sobolev_norm(dual, -alpha)
    norm = scalar_sobolev_norm(f, alpha)
    return [
        _below("spharm", "transform_roundtrip", roundtrip, _ROUNDOFF),
        _below("spharm", "quadrature_orthonormality", grid.orthonormality_residual(), _ROUNDOFF),
        _below("spharm", "sobolev_duality_equality", abs(pairing - norm) / norm, _ROUNDOFF),
    ]


def _sphere_ops_checks() -> List[CheckResult]:
    rng = np.random.default_rng(1)
    lmax = 24
    u = random_rotational_tangent(rng, lmax)
    v = random_rotational_tangent(rng, lmax)
    scale = np.sqrt(tangent_inner(u, u) * tangent_inner(v, v))
    skew = abs(tangent_inner(apply_Lh(u), v) + tangent_inner(u, apply_Lh(v))) / scale

    zonal = zonal_project_spectral(u)
    twice = zonal_project_spectral(zonal)
    kernel = apply_Lh(zonal)
    return [
        _below("sphere_ops", "Lh_skew_symmetry", skew, _ROUNDOFF),
        _below("sphere_ops", "zonal_projector_idempotence", float(np.abs(twice.hodge_psi.coeffs - zonal.hodge_psi.coeffs).max()), _ROUNDOFF),
        _below("sphere_ops", "zonal_fields_in_Lh_kernel", float(np.sqrt(tangent_inner(kernel, kernel))), _ROUNDOFF),
    ]


def _shell_checks() -> List[CheckResult]:
    cfg = IdentityConfig(nr=24, lmax=7, samples=3, refine=False, lifting_cases=6, viscosity_nr=32)
    return run_identities(cfg)


def _sphere_solver_checks() -> List[CheckResult]:
    cfg = SphereRunConfig(lmax=15, epsilon=0.1, T=0.2, dt=0.01, nonlinear=False)
    record = run_accumulate(cfg).record
    drift = abs(record.energy_history[-1] - record.initial_energy) / record.initial_energy
    scale = max(record.bound_history[-1], _ROUNDOFF)
    violations = sum(1 for defect, bound in zip(record.defect_history, record.bound_history) if defect > bound + 1e-8)
    return [
        _below("sphere_solver", "linear_energy_conservation", drift, 1e-10),
        _below("sphere_solver", "wave_identity", record.wave_identity_residual / scale, 1e-8),
        _below("sphere_solver", "defect_bound_violations", violations, 1),
    ]


def _mhd_checks() -> List[CheckResult]:
    rng = np.random.default_rng(2)
    xi = rng.integers(-8, 9, size=(3, 64)).astype(float)
    xi[:, np.sum(xi ** 2, axis=0) == 0] = 1.0
    matrix = wave_mode_matrix(xi)
    skew = float(np.abs(matrix + np.conj(np.swapaxes(matrix, -1, -2))).max())

    grid = BoxGrid.create(16)
    values = grid.forward(rng.standard_normal((3,) + grid.physical_shape))
    projected = project_leray_box(values, grid)
    idempotence = float(np.abs(project_leray_box(projected, grid) - projected).max())

    u_hat = project_leray_box(grid.forward(rng.standard_normal((3,) + grid.physical_shape)), grid)
    b_hat = project_leray_box(grid.forward(rng.standard_normal((3,) + grid.physical_shape)), grid)
    kernel_u, waves_u = kernel_project(u_hat, grid)
    kernel_b, waves_b = kernel_project(b_hat, grid)
    lu, lb = wave_operator(kernel_u, kernel_b, grid)
    in_kernel = float(max(np.abs(lu).max(), np.abs(lb).max()))

    # on ξ₃ ≠ 0 the symbol is bounded below on divergence-free pairs
    lu, lb = wave_operator(waves_u, waves_b, grid)
    image = np.sqrt(np.sum(np.abs(lu) ** 2 + np.abs(lb) ** 2, axis=0))
    source = np.sqrt(np.sum(np.abs(waves_u) ** 2 + np.abs(waves_b) ** 2, axis=0))
    active = source > _ROUNDOFF * source.max()
    coercivity = float((image[active] / source[active]).min())

    report = anisotropic_norm_checks()
    values, length = gaussian_sample()
    gaussian = nash_ratio(values, length)
    record = run_mhd(MhdRunConfig(n=16, T=0.05, dt=0.01, init_kmax=4))
    return [
        _below("mhd", "wave_operator_skew_symmetry", skew, _ROUNDOFF),
        _below("mhd", "box_leray_idempotence", idempotence, 1e-13),
        _below("mhd", "kernel_modes_annihilated", in_kernel, _ROUNDOFF),
        _at_least("mhd", "wave_modes_outside_kernel", coercivity, 0.5),
        _below("mhd", "nash_anisotropic_ratios", report.worst_ratio, report.constant + _ROUNDOFF, f"{len(report.checks)} functions"),
        _below("mhd", "gaussian_nash_ratio", abs(gaussian - _GAUSSIAN_RATIO), 0.01, f"ratio {gaussian:.4f}"),
        _below("mhd", "hls_ratio_bounded", record.hls_ratio, settings.hls_constant, f"s {MhdRunConfig().s:g}"),
    ]


def _harness_checks() -> List[CheckResult]:
    x = np.array([0.1, 0.05, 0.025, 0.0125])
    fit = fit_slope(list(zip(x, 3.0 * np.sqrt(x))))
    scaled = fit_slope(list(zip(7.0 * x, 0.2 * 3.0 * np.sqrt(x))))
    return [
        _below("harness", "fit_slope_exact_power_law", abs(fit.slope - 0.5) + abs(fit.intercept - np.log(3.0)), _ROUNDOFF),
        _below("harness", "fit_slope_scale_invariance", abs(fit.slope - scaled.slope), _ROUNDOFF),
    ]


SUITES: Dict[str, Callable[[], List[CheckResult]]] = {
    "spharm": _spharm_checks,
    "sphere_ops": _sphere_ops_checks,
    "shell": _shell_checks,
    "sphere_solver": _sphere_solver_checks,
    "mhd": _mhd_checks,
    "harness": _harness_checks,
}


def run_suite(module: Optional[str] = None) -> List[CheckResult]:
    """Run the property suite for one module, or for all of them in order"""
    if module is not None and module not in SUITES:
        raise InvalidArgumentError(f"unknown module {module!r}; choose from {', '.join(SUITES)}")
    names = [module] if module else list(SUITES)
    results: List[CheckResult] = []
    for name in names:
        logger.info("verify: %s", name)
        results.extend(SUITES[name]())
    failed = [check.name for check in results if not check.passed]
    logger.info("verify: %d checks, %d failed %s", len(results), len(failed), failed or "")
    return results
