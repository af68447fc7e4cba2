"""
Tests for the sweep artifacts
"""
import csv
import json

import pytest

from config import RotwaveError
from harness import (
    Experiment,
    FitSummary,
    SweepConfig,
    SweepResult,
    SweepRow,
    emit_outputs,
    git_describe,
    render_svg,
)
from harness import outputs


@pytest.fixture
def sphere_result():
    cfg = SweepConfig(experiment=Experiment.SPHERE, epsilons=[0.1, 0.05, 0.025])
    rows = [
        SweepRow(epsilon=eps, values={"epsilon": eps, "T": 1.0, "mu": 0.0, "M0": 1.0, "alpha": -4.0,
                                      "zonal_defect": eps / 3.0, "Lh_integral_norm": 1.0 + eps,
                                      "energy_final": 1.0, "wall_ms": 0.0, "a1_norm": 0.5})
        for eps in cfg.epsilons
    ]
    fit = FitSummary(slope=1.0, intercept=-1.0986, r_squared=1.0, points=3)
    return SweepResult(experiment=cfg.experiment, config=cfg, rows=rows, slope=1.0, intercept=-1.0986,
                       r_squared=1.0, fits={"zonal_defect": fit})


def read_csv(path):
    with path.open(newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


def test_emits_three_artifacts(sphere_result, tmp_path):
    written = emit_outputs(sphere_result, tmp_path / "out")
    assert [path.name for path in written] == ["sweep.csv", "sweep.json", "sweep.svg"]
    assert all(path.exists() for path in written)


def test_csv_schema_and_precision(sphere_result, tmp_path):
    emit_outputs(sphere_result, tmp_path)
    header, *rows = read_csv(tmp_path / "sweep.csv")
    assert header == sphere_result.config.columns
    assert "a1_norm" not in header
    assert len(rows) == 3
    column = header.index("zonal_defect")
    assert float(rows[1][column]) == 0.05 / 3.0


def test_failed_row_leaves_blank_cells(sphere_result, tmp_path):
    sphere_result.rows[2] = SweepRow(epsilon=0.025, ok=False, error="NumericFailureError: boom")
    emit_outputs(sphere_result, tmp_path)
    _, _, _, failed = read_csv(tmp_path / "sweep.csv")
    assert failed[0] == "0.025"
    assert set(failed[1:]) == {""}


def test_json_document(sphere_result, tmp_path, monkeypatch):
    monkeypatch.setattr(outputs, "git_describe", lambda: "v1.0-3-gabc1234")
    emit_outputs(sphere_result, tmp_path)
    document = json.loads((tmp_path / "sweep.json").read_text(encoding="utf-8"))
    assert document["app_name"] == "rotwave"
    assert document["git_describe"] == "v1.0-3-gabc1234"
    assert document["partial"] is False
    assert document["result"]["slope"] == 1.0
    assert document["result"]["fits"]["zonal_defect"]["points"] == 3


def test_empty_result_has_header_only(tmp_path):
    cfg = SweepConfig(experiment=Experiment.MHD, epsilons=[0.2, 0.1, 0.05])
    written = emit_outputs(SweepResult(experiment=cfg.experiment, config=cfg), tmp_path)
    assert [path.name for path in written] == ["sweep.csv", "sweep.json"]
    assert read_csv(tmp_path / "sweep.csv") == [cfg.columns]


def test_svg_contents(sphere_result):
    svg = render_svg(sphere_result)
    assert svg.startswith("<?xml")
    assert svg.count("<circle") == 3
    assert "zonal_defect" in svg
    assert "slope" in svg


def test_svg_without_fit_has_no_line(sphere_result):
    sphere_result.slope = None
    assert "slope" not in render_svg(sphere_result).split("</title>", 1)[1]


def test_write_failure_names_path(sphere_result, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("", encoding="utf-8")
    with pytest.raises(RotwaveError, match="could not write"):
        emit_outputs(sphere_result, blocker / "out")


def test_git_describe_is_text():
    assert isinstance(git_describe(), str) and git_describe()
