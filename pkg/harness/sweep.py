"""
ε-sweep orchestration: runs one member per Rossby number, concurrently when
configured, and fits the defect scaling on log-log axes.
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Tuple, Union

from config import InvalidArgumentError, RotwaveError, settings
from solvers import MhdRunConfig, SphereRunConfig, run_accumulate, run_mhd
from .fitting import fit_slope
from .models import FIT_COLUMNS, Experiment, FitSummary, SweepConfig, SweepResult, SweepRow

logger = logging.getLogger(__name__)

# defect bound slack for the per-output-time chain check
_BOUND_SLACK = 1e-8


def sphere_member(cfg: SphereRunConfig) -> Dict[str, float]:
    """Scalar record of one rotating-sphere run"""
    record = run_accumulate(cfg).record
    violations = sum(
        1 for defect, bound in zip(record.defect_history, record.bound_history)
        if defect > bound + _BOUND_SLACK
    )
    initial = record.initial_energy
    return {
        "epsilon": cfg.epsilon,
        "T": cfg.T,
        "mu": cfg.mu,
        "M0": cfg.M0,
        "alpha": cfg.alpha,
        "zonal_defect": record.defect_history[-1],
        "Lh_integral_norm": record.bound_history[-1],
        "energy_final": record.energy_history[-1],
        "bound_violations": float(violations),
        "energy_drift": abs(record.energy_history[-1] - initial) / initial,
        "wave_identity_residual": record.wave_identity_residual,
        "a1_norm": record.a1_norm,
        "a3_norm": record.a3_norm,
        "m_ext": record.m_ext,
        "grad_integral": record.grad_integral,
    }


def mhd_member(cfg: MhdRunConfig) -> Dict[str, float]:
    """Scalar record of one rotating-MHD box run"""
    record = run_mhd(cfg)
    return {
        "epsilon": cfg.epsilon,
        "T": cfg.T,
        "k": float(cfg.k),
        "s": cfg.s,
        "wave_defect_Hk1": record.wave_defect,
        "dzu_Hk1": record.dzu_Hk1,
        "u_int_Winf": record.u_int_Winf,
        "b_int_Wks": record.b_int_Wks,
        "kernel_component_L2": record.kernel_component_L2,
        "curl_b_Winf": record.curl_b_Winf,
        "dz_curl_b_Hk2": record.dz_curl_b_Hk2,
        "hls_ratio": record.hls_ratio,
    }


def run_member(experiment: Experiment, member: Union[SphereRunConfig, MhdRunConfig]) -> SweepRow:
    """
    Run one sweep member and capture any failure in the row.

    Top-level so it can be shipped to worker processes.
    """
    logger.info("member start: %s eps=%g", experiment.value, member.epsilon)
    started = time.perf_counter()
    try:
        values = sphere_member(member) if experiment is Experiment.SPHERE else mhd_member(member)
    except Exception as e:
        logger.error("member eps=%g failed: %s", member.epsilon, e)
        code = e.exit_code if isinstance(e, RotwaveError) else 1
        return SweepRow(epsilon=member.epsilon, ok=False, error=f"{type(e).__name__}: {e}", exit_code=code)
    elapsed = 0.0 if settings.deterministic_output else 1000.0 * (time.perf_counter() - started)
    values["wall_ms"] = elapsed
    logger.info("member done: %s eps=%g in %.0f ms", experiment.value, member.epsilon, elapsed)
    return SweepRow(epsilon=member.epsilon, values=values)


def _workers(cfg: SweepConfig) -> int:
    workers = settings.threads if settings.threads else cfg.parallelism
    return max(1, min(int(workers), len(cfg.epsilons)))


def _fit(rows: List[SweepRow], column: str) -> FitSummary:
    points: List[Tuple[float, float]] = [(row.epsilon, row.values[column]) for row in rows]
    fit = fit_slope(points)
    return FitSummary(slope=fit.slope, intercept=fit.intercept, r_squared=fit.r_squared, points=fit.points)


def run_sweep(cfg: SweepConfig) -> SweepResult:
    """
    Run every member, sort rows by descending ε and fit each scaling column.

    A failed member marks the result partial and suppresses all fits. The
    verify experiment runs the property suite instead of members.
    """
    if cfg.experiment is Experiment.VERIFY:
        from .suite import run_suite

        return SweepResult(experiment=cfg.experiment, config=cfg, checks=run_suite(cfg.module))

    members = [cfg.member_config(epsilon) for epsilon in cfg.epsilons]
    workers = _workers(cfg)
    logger.info("sweep %s: %d members, %d worker(s)", cfg.experiment.value, len(members), workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_member, [cfg.experiment] * len(members), members))
    else:
        rows = [run_member(cfg.experiment, member) for member in members]
    rows.sort(key=lambda row: row.epsilon, reverse=True)

    result = SweepResult(experiment=cfg.experiment, config=cfg, rows=rows)
    if result.partial:
        failed = [row.epsilon for row in rows if not row.ok]
        logger.warning("sweep partial: members %s failed; slope omitted", failed)
        return result

    for column in FIT_COLUMNS[cfg.experiment]:
        try:
            result.fits[column] = _fit(rows, column)
        except InvalidArgumentError as e:
            logger.warning("no fit for %s: %s", column, e)
    primary = result.fits.get(result.fit_column)
    if primary is not None:
        result.slope, result.intercept, result.r_squared = primary.slope, primary.intercept, primary.r_squared
        logger.info("%s slope %.4f (r² = %.4f)", result.fit_column, primary.slope, primary.r_squared)
    return result
