"""
Tests for sweep orchestration
"""
from pathlib import Path

import pytest

from config import InvalidArgumentError, NumericFailureError, settings
from harness import Experiment, SweepConfig, load_config, mhd_member, run_member, run_sweep
from harness import sweep as sweep_module
from solvers import MhdRunConfig

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def fake_sphere(cfg):
    if cfg.epsilon == 0.05 and cfg.seed == 13:
        raise NumericFailureError("energy grew", time=0.3)
    return {"epsilon": cfg.epsilon, "zonal_defect": 2.0 * cfg.epsilon, "Lh_integral_norm": cfg.epsilon ** 0.5}


@pytest.fixture
def fake_members(monkeypatch, deterministic):
    monkeypatch.setattr(sweep_module, "sphere_member", fake_sphere)


def sphere_sweep(**sphere):
    return SweepConfig(experiment=Experiment.SPHERE, epsilons=[0.025, 0.1, 0.05, 0.0125], sphere=sphere)


class TestRunSweep:
    def test_rows_sorted_and_fitted(self, fake_members):
        result = run_sweep(sphere_sweep())
        assert [row.epsilon for row in result.rows] == [0.1, 0.05, 0.025, 0.0125]
        assert not result.partial
        assert result.slope == pytest.approx(1.0)
        assert result.r_squared == pytest.approx(1.0)
        assert result.fits["Lh_integral_norm"].slope == pytest.approx(0.5)
        assert all(row.values["wall_ms"] == 0.0 for row in result.rows)

    def test_failed_member_makes_result_partial(self, fake_members):
        result = run_sweep(sphere_sweep(seed=13))
        assert result.partial
        assert result.slope is None and result.fits == {}
        failed = [row for row in result.rows if not row.ok]
        assert [row.epsilon for row in failed] == [0.05]
        assert failed[0].error.startswith("NumericFailureError: energy grew")
        assert failed[0].exit_code == 3

    def test_unexpected_failure_gets_generic_exit_code(self, monkeypatch, deterministic):
        def broken(cfg):
            raise KeyError("zonal_defect")

        monkeypatch.setattr(sweep_module, "sphere_member", broken)
        result = run_sweep(sphere_sweep())
        assert result.partial
        assert {row.exit_code for row in result.rows} == {1}
        assert all(row.error.startswith("KeyError") for row in result.rows)

    def test_unfittable_column_is_skipped(self, monkeypatch, deterministic, caplog):
        monkeypatch.setattr(sweep_module, "sphere_member", lambda cfg: {"zonal_defect": 0.0, "Lh_integral_norm": cfg.epsilon})
        result = run_sweep(sphere_sweep())
        assert result.slope is None
        assert "zonal_defect" not in result.fits
        assert result.fits["Lh_integral_norm"].slope == pytest.approx(1.0)
        assert "no fit for zonal_defect" in caplog.text

    def test_member_failure_is_captured(self, deterministic, monkeypatch):
        monkeypatch.setattr(settings, "blowup_factor", 0.5)
        row = run_member(Experiment.MHD, MhdRunConfig(n=16, epsilon=0.1, T=0.02))
        assert not row.ok
        assert row.error.startswith("NumericFailureError")
        assert row.exit_code == 3
        assert row.values == {}

    def test_verify_runs_property_suite(self):
        result = run_sweep(SweepConfig(experiment=Experiment.VERIFY, module="harness"))
        assert result.rows == []
        assert result.checks and all(check.passed for check in result.checks)

    def test_verify_unknown_module(self):
        with pytest.raises(InvalidArgumentError, match="unknown module"):
            run_sweep(SweepConfig(experiment=Experiment.VERIFY, module="torus"))


class TestWorkers:
    def test_parallelism_capped_by_members(self, monkeypatch):
        monkeypatch.setattr(settings, "threads", None)
        assert sweep_module._workers(SweepConfig(experiment=Experiment.SPHERE, epsilons=[0.1, 0.05, 0.02], parallelism=8)) == 3

    def test_threads_override(self, monkeypatch):
        monkeypatch.setattr(settings, "threads", 2)
        assert sweep_module._workers(SweepConfig(experiment=Experiment.SPHERE, epsilons=[0.1, 0.05, 0.02], parallelism=1)) == 2

    def test_parallel_matches_serial(self, deterministic):
        serial = sphere_sweep(lmax=7, T=0.05, dt=0.01)
        parallel = serial.model_copy(update={"parallelism": 2})
        a, b = run_sweep(serial), run_sweep(parallel)
        strip = lambda rows: [{k: v for k, v in row.values.items() if k != "wall_ms"} for row in rows]
        assert strip(a.rows) == strip(b.rows)
        assert a.slope == b.slope


def test_mhd_member_columns():
    values = mhd_member(MhdRunConfig(n=16, epsilon=0.1, T=0.02))
    for column in ("wave_defect_Hk1", "dzu_Hk1", "u_int_Winf", "b_int_Wks", "kernel_component_L2", "hls_ratio"):
        assert values[column] >= 0.0
    assert values["k"] == 3.0


@pytest.mark.slow
def test_sphere_zonal_scaling():
    result = run_sweep(load_config(CONFIGS / "sphere.toml"))
    assert not result.partial
    assert 0.8 <= result.slope <= 1.2
    assert result.r_squared >= 0.98
    assert all(row.values["bound_violations"] == 0.0 for row in result.rows)
    assert all(row.values["energy_drift"] < 1e-6 for row in result.rows)


@pytest.mark.slow
def test_mhd_wave_defect_scaling():
    result = run_sweep(load_config(CONFIGS / "mhd.toml"))
    assert not result.partial
    assert 0.8 <= result.slope <= 1.2
    assert result.r_squared >= 0.95
    # only lower edges are asserted; linear waves already give ∫u of order ε
    assert result.fits["u_int_Winf"].slope >= 0.4
    assert result.fits["b_int_Wks"].slope >= 0.03
