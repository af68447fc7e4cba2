"""
Tests for process settings and the error hierarchy
"""
import pytest

from config import (
    AssertionFailure,
    ConfigError,
    InvalidArgumentError,
    NumericFailureError,
    RotwaveError,
    Settings,
)


class TestSettings:
    def test_defaults(self, monkeypatch):
        for name in ("ROTWAVE_LOG_LEVEL", "ROTWAVE_THREADS", "ROTWAVE_BLOWUP_FACTOR"):
            monkeypatch.delenv(name, raising=False)
        settings = Settings(_env_file=None)
        assert settings.app_name == "rotwave"
        assert settings.log_level == "INFO"
        assert settings.threads is None
        assert settings.blowup_factor == pytest.approx(1.10)
        assert settings.zero_defect_floor == pytest.approx(1e-14)
        assert settings.norm_check_constant == pytest.approx(2.0)

    def test_environment_prefix(self, monkeypatch):
        monkeypatch.setenv("ROTWAVE_THREADS", "3")
        monkeypatch.setenv("rotwave_deterministic_output", "true")
        settings = Settings(_env_file=None)
        assert settings.threads == 3
        assert settings.deterministic_output is True


class TestErrors:
    @pytest.mark.parametrize("error, code", [
        (RotwaveError("x"), 1),
        (InvalidArgumentError("x"), 1),
        (AssertionFailure("x"), 1),
        (ConfigError("x"), 2),
        (NumericFailureError("x"), 3),
    ])
    def test_exit_codes(self, error, code):
        assert error.exit_code == code

    def test_invalid_argument_is_value_error(self):
        with pytest.raises(ValueError):
            raise InvalidArgumentError("bad lmax")

    def test_config_error_carries_location(self):
        error = ConfigError("bad value", field="sphere.lmax", line=4)
        assert error.field == "sphere.lmax"
        assert error.line == 4

    def test_numeric_failure_message(self):
        error = NumericFailureError("energy grew", time=0.25, residual=1e-3)
        assert "t=0.25" in str(error)
        assert "residual=1.000e-03" in str(error)
        assert error.time == 0.25
