"""
Tests for the rotwave command line
"""
import json

import pytest

from harness import sweep as sweep_module
from config import NumericFailureError
from main import build_parser, main


def fake_sphere(cfg):
    return {"zonal_defect": cfg.epsilon, "Lh_integral_norm": 1.0 + cfg.epsilon}


SPHERE = 'experiment = "sphere"\nepsilons = [0.1, 0.05, 0.025]\n'


def test_parser_requires_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_verify_module(capsys):
    assert main(["verify", "--module", "harness"]) == 0
    out = capsys.readouterr().out
    assert "[harness]" in out
    assert "2/2 checks passed" in out


def test_verify_unknown_module(capsys):
    assert main(["verify", "--module", "torus"]) == 1
    assert "unknown module" in capsys.readouterr().err


def test_sphere_sweep_writes_outputs(write_toml, tmp_path, monkeypatch, deterministic, capsys):
    monkeypatch.setattr(sweep_module, "sphere_member", fake_sphere)
    out = tmp_path / "results"
    assert main(["sphere-sweep", "--config", str(write_toml(SPHERE)), "--out", str(out)]) == 0
    assert {path.name for path in out.iterdir()} == {"sweep.csv", "sweep.json", "sweep.svg"}
    assert json.loads((out / "sweep.json").read_text(encoding="utf-8"))["result"]["slope"] == pytest.approx(1.0)
    assert "slope 1.0000" in capsys.readouterr().out


def test_partial_sweep_exit_code(write_toml, tmp_path, monkeypatch, deterministic, capsys):
    def failing_sphere(cfg):
        if cfg.epsilon == 0.05:
            raise NumericFailureError("energy grew", time=0.2)
        return fake_sphere(cfg)

    monkeypatch.setattr(sweep_module, "sphere_member", failing_sphere)
    out = tmp_path / "results"
    assert main(["sphere-sweep", "--config", str(write_toml(SPHERE)), "--out", str(out)]) == 3
    assert (out / "sweep.json").exists()
    assert json.loads((out / "sweep.json").read_text(encoding="utf-8"))["partial"] is True
    assert "failed members: eps=0.05" in capsys.readouterr().err


def test_partial_sweep_without_numeric_failure(write_toml, tmp_path, monkeypatch, deterministic, capsys):
    def failing_sphere(cfg):
        if cfg.epsilon == 0.1:
            raise ValueError("bad member")
        return fake_sphere(cfg)

    monkeypatch.setattr(sweep_module, "sphere_member", failing_sphere)
    assert main(["sphere-sweep", "--config", str(write_toml(SPHERE)), "--out", str(tmp_path / "results")]) == 1
    assert "sweep is partial" in capsys.readouterr().err


def test_config_error_exit_code(write_toml, capsys):
    path = write_toml('experiment = "sphere"\nepsilons = [0.1]\n')
    assert main(["sphere-sweep", "--config", str(path)]) == 2
    assert "need ≥ 3" in capsys.readouterr().err


def test_wrong_experiment(write_toml, capsys):
    assert main(["mhd-sweep", "--config", str(write_toml(SPHERE))]) == 1
    assert "not mhd" in capsys.readouterr().err


def test_failed_identities_exit_code(write_toml, capsys):
    text = "[identities]\nnr = 24\nlmax = 7\nsamples = 1\nrefine = false\nlifting_cases = 1\nviscosity_nr = 32\nlifting_tolerance = 0.0\n"
    assert main(["identities", "--config", str(write_toml(text))]) == 1
    out = capsys.readouterr().out
    assert "✗ boundary_lifting" in out
