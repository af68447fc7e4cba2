"""
Tests for TOML configuration loading
"""
from pathlib import Path

import pytest

from config import ConfigError
from harness import Experiment, load_config, load_identity_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def test_minimal_sphere_config(write_toml):
    cfg = load_config(write_toml('experiment = "sphere"\nepsilons = [0.025, 0.1, 0.05]\n'))
    assert cfg.experiment is Experiment.SPHERE
    assert cfg.epsilons == [0.1, 0.05, 0.025]
    assert cfg.alpha == -4.0
    assert cfg.parallelism == 1
    assert cfg.sphere.lmax == 31


def test_nested_tables(write_toml):
    text = 'experiment = "mhd"\nepsilons = [0.2, 0.1, 0.05]\ns = 9.0\n\n[mhd]\nn = 16\nk = 4\n'
    cfg = load_config(write_toml(text))
    member = cfg.member_config(0.1)
    assert (member.n, member.k, member.epsilon, member.s) == (16, 4, 0.1, 9.0)


def test_repository_configs():
    assert load_config(CONFIGS / "sphere.toml").experiment is Experiment.SPHERE
    assert load_config(CONFIGS / "mhd.toml").experiment is Experiment.MHD
    assert load_config(CONFIGS / "verify.toml").experiment is Experiment.VERIFY


def test_sphere_config_resolves_fastest_wave():
    # the l = 1 Rossby-Haurwitz wave turns at 1/(2ε) in the rotating frame
    cfg = load_config(CONFIGS / "sphere.toml")
    for epsilon in cfg.epsilons:
        member = cfg.member_config(epsilon)
        assert member.dt / (2.0 * epsilon) <= 0.1 + 1e-12


@pytest.mark.parametrize(
    "text, fragment",
    [
        ('experiment = "sphere"\nepsilons = [0.1]\n', "need ≥ 3"),
        ('experiment = "sphere"\nepsilons = [0.1, 0.1, 0.05]\n', "distinct"),
        ('experiment = "sphere"\nepsilons = [0.1, -0.05, 0.01]\n', "positive"),
        ('experiment = "torus"\nepsilons = [0.1, 0.05, 0.01]\n', "experiment"),
    ],
)
def test_invalid_sweeps(write_toml, text, fragment):
    with pytest.raises(ConfigError, match=fragment) as info:
        load_config(write_toml(text))
    assert info.value.exit_code == 2


def test_field_path_reported(write_toml):
    text = 'experiment = "sphere"\nepsilons = [0.1, 0.05, 0.025]\n\n[sphere]\nlmax = 2\n'
    with pytest.raises(ConfigError) as info:
        load_config(write_toml(text))
    assert info.value.field == "sphere.lmax"


def test_unknown_key_rejected(write_toml):
    with pytest.raises(ConfigError) as info:
        load_config(write_toml('experiment = "sphere"\nepsilons = [0.1, 0.05, 0.025]\ncolour = 1\n'))
    assert info.value.field == "colour"


def test_syntax_error_line(write_toml):
    with pytest.raises(ConfigError) as info:
        load_config(write_toml('experiment = "sphere"\nepsilons = [0.1, 0.05\nparallelism = = 2\n'))
    assert info.value.line is not None


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "absent.toml")


def test_identity_table(write_toml):
    cfg = load_identity_config(write_toml("[identities]\nnr = 32\nlmax = 9\nrefine = false\n"))
    assert (cfg.nr, cfg.lmax, cfg.refine) == (32, 9, False)
    assert cfg.delta == 0.25


def test_identity_bare_file(write_toml):
    assert load_identity_config(write_toml("samples = 4\n")).samples == 4


def test_identity_rejects_bad_delta(write_toml):
    with pytest.raises(ConfigError) as info:
        load_identity_config(write_toml("[identities]\nlifting_deltas = [0.6]\n"))
    assert info.value.field == "lifting_deltas"
