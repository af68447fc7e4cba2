from .sphere_solver import (
    ForcingMode,
    SphereRunConfig,
    SphereState,
    SphereRecord,
    SphereRun,
    SphereSolver,
    dealias_grid,
    linear_operator_blocks,
    init_state,
    step,
    run_accumulate,
    zonal_defect,
    wave_operator_stream,
    stable_dt,
    energy,
    enstrophy,
    grad_norm_sq,
    synthesize_velocity,
    synthesize_vorticity,
)
from .box import (
    BoxGrid,
    curl_hat,
    dz_hat,
    divergence_hat,
    project_leray_box,
    kernel_project,
    inner_box,
    sobolev_norm_box,
    winf_norm,
    wms_norm,
)
from .mhd import (
    MhdRunConfig,
    MhdState,
    MhdRecord,
    MhdSolver,
    wave_mode_matrix,
    wave_operator,
    apply_wave_operator,
    nonlinear_terms,
    mhd_rhs,
    random_state,
    step_mhd,
    run_mhd,
    hls_exponent,
    hls_ratio,
    pair_sobolev_norm,
)
from .mhd import energy as mhd_energy
from .inequalities import (
    NormCheck,
    NormCheckReport,
    nash_sides,
    nash_ratio,
    anisotropic_sides,
    anisotropic_ratio,
    gaussian_sample,
    anisotropic_norm_checks,
)

__all__ = [
    "ForcingMode",
    "SphereRunConfig",
    "SphereState",
    "SphereRecord",
    "SphereRun",
    "SphereSolver",
    "dealias_grid",
    "linear_operator_blocks",
    "init_state",
    "step",
    "run_accumulate",
    "zonal_defect",
    "wave_operator_stream",
    "stable_dt",
    "energy",
    "enstrophy",
    "grad_norm_sq",
    "synthesize_velocity",
    "synthesize_vorticity",
    "BoxGrid",
    "curl_hat",
    "dz_hat",
    "divergence_hat",
    "project_leray_box",
    "kernel_project",
    "inner_box",
    "sobolev_norm_box",
    "winf_norm",
    "wms_norm",
    "MhdRunConfig",
    "MhdState",
    "MhdRecord",
    "MhdSolver",
    "wave_mode_matrix",
    "wave_operator",
    "apply_wave_operator",
    "nonlinear_terms",
    "mhd_rhs",
    "random_state",
    "step_mhd",
    "run_mhd",
    "hls_exponent",
    "hls_ratio",
    "pair_sobolev_norm",
    "mhd_energy",
    "NormCheck",
    "NormCheckReport",
    "nash_sides",
    "nash_ratio",
    "anisotropic_sides",
    "anisotropic_ratio",
    "gaussian_sample",
    "anisotropic_norm_checks",
]
