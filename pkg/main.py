"""
rotwave command-line interface
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from config import AssertionFailure, NumericFailureError, RotwaveError, settings
from harness import (
    CheckResult,
    Experiment,
    SweepConfig,
    emit_outputs,
    load_config,
    load_identity_config,
    run_identities,
    run_suite,
    run_sweep,
)

logger = logging.getLogger("rotwave")


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def banner(title: str) -> None:
    print(f"\n{'=' * 60}")
    print(f"{settings.app_name} v{settings.app_version}: {title}")
    print(f"{'=' * 60}")


def report_checks(checks: List[CheckResult]) -> None:
    module = None
    for check in checks:
        if check.module != module:
            module = check.module
            print(f"\n[{module}]")
        mark = "✓" if check.passed else "✗"
        value = "" if check.value is None else f" {check.value:.3e}"
        limit = "" if check.threshold is None else f" (limit {check.threshold:.1e})"
        detail = f"  {check.detail}" if check.detail else ""
        print(f"  {mark} {check.name}:{value}{limit}{detail}")
    failed = sum(1 for check in checks if not check.passed)
    print(f"\n{len(checks) - failed}/{len(checks)} checks passed")
    if failed:
        raise AssertionFailure(f"{failed} check(s) failed")


def cmd_verify(args: argparse.Namespace) -> None:
    banner("property suite")
    report_checks(run_suite(args.module))


def cmd_identities(args: argparse.Namespace) -> None:
    cfg = load_identity_config(args.config)
    banner("shell identities")
    report_checks(run_identities(cfg))


def _sweep(args: argparse.Namespace, experiment: Experiment) -> None:
    cfg: SweepConfig = load_config(args.config)
    if cfg.experiment is not experiment:
        raise AssertionFailure(f"{args.config} describes a {cfg.experiment.value} sweep, not {experiment.value}")
    banner(f"{experiment.value} sweep over {len(cfg.epsilons)} epsilon values")
    result = run_sweep(cfg)
    out = Path(args.out or cfg.output_dir or settings.output_dir)
    for path in emit_outputs(result, out):
        print(f"✓ wrote {path}")
    for row in result.rows:
        mark = "✓" if row.ok else "✗"
        print(f"  {mark} eps={row.epsilon:g}" + (f"  {row.error}" if row.error else ""))
    if result.partial:
        failed = [row for row in result.rows if not row.ok]
        message = "sweep is partial, failed members: " + ", ".join(f"eps={row.epsilon:g}" for row in failed)
        if any(row.exit_code == NumericFailureError.exit_code for row in failed):
            raise NumericFailureError(message)
        raise RotwaveError(message)
    if result.slope is not None:
        print(f"✓ slope {result.slope:.4f} (r² = {result.r_squared:.4f}) for {result.fit_column}")
        for column, fit in result.fits.items():
            if column != result.fit_column:
                print(f"  {column}: slope {fit.slope:.4f} (r² = {fit.r_squared:.4f})")


def cmd_sphere_sweep(args: argparse.Namespace) -> None:
    _sweep(args, Experiment.SPHERE)


def cmd_mhd_sweep(args: argparse.Namespace) -> None:
    _sweep(args, Experiment.MHD)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rotwave", description="Rotating-fluid spectral toolkit and ε-sweep harness")
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="run the operator property suite")
    verify.add_argument("--module", help="restrict to one module (spharm, sphere_ops, shell, sphere_solver, mhd, harness)")
    verify.set_defaults(handler=cmd_verify)

    for name, handler, help_text in (
        ("sphere-sweep", cmd_sphere_sweep, "ε-sweep of the rotating-sphere solver"),
        ("mhd-sweep", cmd_mhd_sweep, "ε-sweep of the rotating-MHD box solver"),
    ):
        sweep = commands.add_parser(name, help=help_text)
        sweep.add_argument("--config", required=True, help="TOML sweep configuration")
        sweep.add_argument("--out", help="output directory (overrides output_dir)")
        sweep.set_defaults(handler=handler)

    identities = commands.add_parser("identities", help="shell identity checks")
    identities.add_argument("--config", required=True, help="TOML identity configuration")
    identities.set_defaults(handler=cmd_identities)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(settings.log_level)
    try:
        args.handler(args)
    except RotwaveError as e:
        print(f"✗ {e}", file=sys.stderr)
        return e.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
