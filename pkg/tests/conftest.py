"""
Shared fixtures for the rotwave test suite
"""
from pathlib import Path

import numpy as np
import pytest

from config import settings
from shell import ShellGeometry
from solvers import BoxGrid
from spectral import build_grid


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def grid():
    return build_grid(15)


@pytest.fixture
def geometry():
    """Small shell used by the fast operator tests"""
    return ShellGeometry.create(0.25, 24, 7)


@pytest.fixture
def box():
    return BoxGrid.create(16)


@pytest.fixture
def write_toml(tmp_path: Path):
    """Write TOML text to a file under tmp_path and return its path"""
    def _write(text: str, name: str = "config.toml") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write


@pytest.fixture
def deterministic(monkeypatch):
    monkeypatch.setattr(settings, "deterministic_output", True)
    monkeypatch.setattr(settings, "threads", None)
