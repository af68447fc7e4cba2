"""
Sweep artifacts: sweep.csv, sweep.json and sweep.svg
"""
import csv
import logging
import math
import subprocess
from pathlib import Path
from typing import Dict, List, Optional, Union

from jinja2 import Environment, PackageLoader, StrictUndefined

from config import RotwaveError, settings
from .models import SweepDocument, SweepResult

logger = logging.getLogger(__name__)

_WIDTH, _HEIGHT, _MARGIN = 640, 420, 64

_templates = Environment(
    loader=PackageLoader("harness", "templates"),
    undefined=StrictUndefined,
    autoescape=True,
    trim_blocks=True,
    lstrip_blocks=True,
)


def git_describe() -> str:
    """`git describe --always --dirty`, or "unknown" outside a checkout"""
    try:
        completed = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True,
            text=True,
            timeout=10,
            check=True,
        )
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    return completed.stdout.strip() or "unknown"


def _cell(value: Optional[float]) -> str:
    return "" if value is None else repr(float(value))


def write_csv(res: SweepResult, path: Path) -> None:
    columns = res.config.columns
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in res.rows:
            values = dict(row.values, epsilon=row.epsilon)
            writer.writerow([_cell(values.get(column)) for column in columns])


def write_json(res: SweepResult, path: Path) -> None:
    document = SweepDocument(
        app_name=settings.app_name,
        app_version=settings.app_version,
        git_describe=git_describe(),
        partial=res.partial,
        result=res,
    )
    path.write_text(document.model_dump_json(indent=2), encoding="utf-8")


def _decades(low: float, high: float) -> List[int]:
    return list(range(math.floor(low), math.ceil(high) + 1))


def plot_context(res: SweepResult) -> Optional[Dict]:
    """Pixel coordinates of the log-log scatter and fitted line, or None without data"""
    column = res.fit_column
    points = [
        (row.epsilon, row.values[column])
        for row in res.rows
        if row.ok and column and row.values.get(column, 0.0) > 0.0
    ]
    if not points:
        return None

    log_x = [math.log10(x) for x, _ in points]
    log_y = [math.log10(y) for _, y in points]
    x_ticks = _decades(min(log_x), max(log_x))
    y_ticks = _decades(min(log_y), max(log_y))
    x_lo, x_hi = x_ticks[0], max(x_ticks[-1], x_ticks[0] + 1)
    y_lo, y_hi = y_ticks[0], max(y_ticks[-1], y_ticks[0] + 1)

    def px(value: float) -> float:
        return _MARGIN + (value - x_lo) / (x_hi - x_lo) * (_WIDTH - 2 * _MARGIN)

    def py(value: float) -> float:
        return _HEIGHT - _MARGIN - (value - y_lo) / (y_hi - y_lo) * (_HEIGHT - 2 * _MARGIN)

    line = None
    if res.slope is not None:
        ends = [min(log_x), max(log_x)]
        # ln y = slope ln x + intercept, so in decades the intercept scales by 1/ln 10
        fitted = [res.slope * x + res.intercept / math.log(10.0) for x in ends]
        line = {"x1": px(ends[0]), "y1": py(fitted[0]), "x2": px(ends[1]), "y2": py(fitted[1])}

    return {
        "width": _WIDTH,
        "height": _HEIGHT,
        "margin": _MARGIN,
        "title": f"{res.experiment.value} sweep: {column} vs epsilon",
        "x_label": "epsilon",
        "y_label": column,
        "points": [{"cx": px(x), "cy": py(y)} for x, y in zip(log_x, log_y)],
        "x_ticks": [{"pos": px(t), "label": f"1e{t}"} for t in range(x_lo, x_hi + 1)],
        "y_ticks": [{"pos": py(t), "label": f"1e{t}"} for t in range(y_lo, y_hi + 1)],
        "line": line,
        "slope": res.slope,
        "r_squared": res.r_squared,
    }


def render_svg(res: SweepResult) -> Optional[str]:
    context = plot_context(res)
    if context is None:
        return None
    return _templates.get_template("sweep.svg.j2").render(**context)


def emit_outputs(res: SweepResult, directory: Union[str, Path]) -> List[Path]:
    """
    Write sweep.csv, sweep.json and (when there is data to plot) sweep.svg.

    Returns the paths written; I/O failures surface as RotwaveError naming
    the path.
    """
    directory = Path(directory)
    written: List[Path] = []
    path = directory
    try:
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / "sweep.csv"
        write_csv(res, path)
        written.append(path)
        path = directory / "sweep.json"
        write_json(res, path)
        written.append(path)
        svg = render_svg(res)
        if svg is not None:
            path = directory / "sweep.svg"
            path.write_text(svg, encoding="utf-8")
            written.append(path)
    except OSError as e:
        raise RotwaveError(f"could not write {path}: {e.strerror or e}")
    logger.info("wrote %s", ", ".join(str(p) for p in written))
    return written
