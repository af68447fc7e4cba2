from .models import (
    Experiment,
    SweepConfig,
    IdentityConfig,
    SweepRow,
    FitSummary,
    CheckResult,
    SweepResult,
    SweepDocument,
    SPHERE_COLUMNS,
    MHD_COLUMNS,
    FIT_COLUMNS,
)
from .loader import load_config, load_identity_config
from .fitting import SlopeFit, fit_slope
from .sweep import run_sweep, run_member, sphere_member, mhd_member
from .outputs import emit_outputs, git_describe, render_svg
from .suite import SUITES, run_identities, run_suite

__all__ = [
    "Experiment",
    "SweepConfig",
    "IdentityConfig",
    "SweepRow",
    "FitSummary",
    "CheckResult",
    "SweepResult",
    "SweepDocument",
    "SPHERE_COLUMNS",
    "MHD_COLUMNS",
    "FIT_COLUMNS",
    "load_config",
    "load_identity_config",
    "SlopeFit",
    "fit_slope",
    "run_sweep",
    "run_member",
    "sphere_member",
    "mhd_member",
    "emit_outputs",
    "git_describe",
    "render_svg",
    "SUITES",
    "run_identities",
    "run_suite",
]
