"""
Nash-type inequalities behind the time-average decay estimates:

    ‖f‖²_{L^∞} ≤ C ‖f‖_{L²} ‖f′‖_{L²}                     (one dimension)
    ‖g‖²_{L^∞_z(H^m_xy)} ≤ C ‖g‖_{H^m} ‖∂_z g‖_{H^m}       (box, zero z-mean)

Both sides are computed by quadrature and reported as ratios.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.fft

from config import AssertionFailure, InvalidArgumentError, settings
from .box import BoxGrid, kernel_project, sobolev_norm_box

logger = logging.getLogger(__name__)

_KERNEL_TOLERANCE = 1e-12


@dataclass(frozen=True)
class NormCheck:
    name: str
    kind: str
    lhs: float
    rhs: float

    @property
    def ratio(self) -> float:
        if self.rhs == 0.0:
            return 0.0
        return self.lhs / self.rhs


@dataclass
class NormCheckReport:
    constant: float
    checks: List[NormCheck] = field(default_factory=list)

    @property
    def worst_ratio(self) -> float:
        return max((check.ratio for check in self.checks), default=0.0)

    @property
    def passed(self) -> bool:
        return self.worst_ratio <= self.constant

    def assert_passed(self) -> None:
        failures = [check for check in self.checks if check.ratio > self.constant]
        if failures:
            names = ", ".join(f"{check.name} ({check.ratio:.3f})" for check in failures)
            raise AssertionFailure(f"norm ratios above {self.constant}: {names}")


def nash_sides(values: np.ndarray, length: float) -> Tuple[float, float]:
    """(‖f‖²_∞, ‖f‖₂‖f′‖₂) for periodic samples of f on [0, length)"""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size < 4:
        raise InvalidArgumentError("need a one-dimensional sample of at least 4 points")
    n = values.size
    h = length / n
    wavenumbers = 2.0 * np.pi * scipy.fft.rfftfreq(n, h)
    derivative = scipy.fft.irfft(1j * wavenumbers * scipy.fft.rfft(values), n)
    l2 = np.sqrt(h * np.sum(values ** 2))
    dl2 = np.sqrt(h * np.sum(derivative ** 2))
    return float(np.max(np.abs(values)) ** 2), float(l2 * dl2)


def nash_ratio(values: np.ndarray, length: float) -> float:
    lhs, rhs = nash_sides(values, length)
    return lhs / rhs if rhs else 0.0


def anisotropic_sides(g_hat: np.ndarray, m: int, grid: BoxGrid) -> Tuple[float, float]:
    """
    (‖g‖²_{L^∞_z(H^m_xy)}, ‖g‖_{H^m}‖∂_z g‖_{H^m}) for a real scalar given by
    its box coefficients. The ξ₃ = 0 part must vanish.
    """
    kernel, _ = kernel_project(g_hat, grid)
    scale = max(1.0, float(np.abs(g_hat).max()))
    if float(np.abs(kernel).max()) > _KERNEL_TOLERANCE * scale:
        raise InvalidArgumentError("anisotropic estimate needs zero mean in z (ξ₃ = 0 modes present)")

    values = grid.inverse(g_hat)
    # per-slice Fourier coefficients in (x, y)
    slices = scipy.fft.fft2(values, axes=(0, 1)) / grid.n ** 2
    k = scipy.fft.fftfreq(grid.n, 1.0 / grid.n)
    weight = (1.0 + k[:, None] ** 2 + k[None, :] ** 2) ** m
    slice_norms = (2.0 * np.pi) ** 2 * np.sum(weight[:, :, None] * np.abs(slices) ** 2, axis=(0, 1))
    lhs = float(slice_norms.max())
    rhs = sobolev_norm_box(g_hat, m, grid) * sobolev_norm_box(1j * grid.xi[2] * g_hat, m, grid)
    return lhs, float(rhs)


def anisotropic_ratio(g_hat: np.ndarray, m: int, grid: BoxGrid) -> float:
    lhs, rhs = anisotropic_sides(g_hat, m, grid)
    return lhs / rhs if rhs else 0.0


# --- corpus ----------------------------------------------------------------------------


def gaussian_sample(width: float = 1.0, length: float = 40.0, n: int = 4096) -> Tuple[np.ndarray, float]:
    """e^{−x²/(2w²)} centred in a window wide enough that the tails vanish"""
    x = (np.arange(n) - n // 2) * (length / n)
    return np.exp(-0.5 * (x / width) ** 2), length


def _one_dimensional_corpus() -> List[Tuple[str, np.ndarray, float]]:
    corpus = []
    for width in (0.5, 1.0, 1.5, 2.0):
        values, length = gaussian_sample(width)
        corpus.append((f"gaussian(w={width})", values, length))
    z = 2.0 * np.pi * np.arange(512) / 512
    for wavenumber in (1, 2, 3):
        corpus.append((f"sin({wavenumber}z)", np.sin(wavenumber * z), 2.0 * np.pi))
    corpus.append(("sin z + cos 3z / 2", np.sin(z) + 0.5 * np.cos(3 * z), 2.0 * np.pi))
    values, length = gaussian_sample(1.0)
    x = (np.arange(values.size) - values.size // 2) * (length / values.size)
    corpus.append(("wave packet", values * np.cos(3.0 * x), length))
    corpus.append(("sech²", 1.0 / np.cosh(x) ** 2, length))
    return corpus


def _box_corpus(grid: BoxGrid, count: int, seed: int) -> List[Tuple[str, np.ndarray, int]]:
    rng = np.random.default_rng(seed)
    x, y, z = grid.coordinates()
    corpus = [
        ("sin z", grid.forward(np.sin(z)), 1),
        ("cos x sin 2z", grid.forward(np.cos(x) * np.sin(2 * z)), 1),
        ("exp(cos x) sin z", grid.forward(np.exp(np.cos(x)) * np.sin(z)), 1),
    ]
    band = np.all(np.abs(grid.xi) <= 3, axis=0) & (grid.xi[2] != 0)
    for i in range(count - len(corpus)):
        shape = grid.spectral_shape
        spectrum = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * band / (1.0 + grid.xi_sq)
        _, waves = kernel_project(grid.forward(grid.inverse(spectrum)), grid)
        corpus.append((f"random[{i}]", waves, i % 3))
    return corpus


def anisotropic_norm_checks(
    fields: Optional[Sequence[Tuple[str, np.ndarray, float]]] = None,
    box_fields: Optional[Sequence[Tuple[str, np.ndarray, int]]] = None,
    grid: Optional[BoxGrid] = None,
    constant: Optional[float] = None,
) -> NormCheckReport:
    """
    Ratio report for both inequalities. Defaults to a 25-function corpus:
    10 one-dimensional profiles and 15 zero-z-mean box scalars.
    """
    grid = grid or BoxGrid.create(16)
    report = NormCheckReport(constant=settings.norm_check_constant if constant is None else constant)
    for name, values, length in (_one_dimensional_corpus() if fields is None else fields):
        lhs, rhs = nash_sides(values, length)
        report.checks.append(NormCheck(name, "nash", lhs, rhs))
    for name, g_hat, m in (_box_corpus(grid, 15, seed=0) if box_fields is None else box_fields):
        lhs, rhs = anisotropic_sides(g_hat, m, grid)
        report.checks.append(NormCheck(name, "anisotropic", lhs, rhs))
    logger.info("norm checks: %d functions, worst ratio %.4f", len(report.checks), report.worst_ratio)
    return report
