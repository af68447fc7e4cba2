"""
Least-squares slope fits on log-log data
"""
import logging
from typing import NamedTuple, Sequence, Tuple

import numpy as np
from scipy import stats

from config import InvalidArgumentError, settings

logger = logging.getLogger(__name__)


class SlopeFit(NamedTuple):
    slope: float
    intercept: float
    r_squared: float
    points: int


def fit_slope(points: Sequence[Tuple[float, float]]) -> SlopeFit:
    """
    Ordinary least squares of ln y on ln x.

    Rows with y below settings.zero_defect_floor are dropped with a warning;
    at least three rows must remain.
    """
    kept = []
    for x, y in points:
        if x <= 0 or y < 0 or not np.isfinite(x) or not np.isfinite(y):
            raise InvalidArgumentError(f"fit points need positive finite coordinates, got ({x}, {y})")
        if y < settings.zero_defect_floor:
            logger.warning("dropping fit row x=%g with y=%.3e below %.1e", x, y, settings.zero_defect_floor)
            continue
        kept.append((x, y))
    if len(kept) < 3:
        raise InvalidArgumentError(f"need at least 3 usable points for a slope fit, got {len(kept)}")

    log_x, log_y = np.log(np.array(kept)).T
    fit = stats.linregress(log_x, log_y)
    r_squared = float(min(1.0, max(0.0, fit.rvalue ** 2)))
    return SlopeFit(float(fit.slope), float(fit.intercept), r_squared, len(kept))
