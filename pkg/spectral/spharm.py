"""
Spherical-harmonic transform engine and spectral Sobolev norms on S².

Conventions: complex orthonormal harmonics with the Condon-Shortley phase,
Y_l^m(θ, φ) = P̄_l^m(cos θ) e^{imφ} / √(2π), where the Legendre tables are
normalized so that ∫_{-1}^{1} P̄_l^m P̄_{l'}^m dμ = δ_{ll'}. Coefficients are
stored in a dense (L+1, 2L+1) array indexed [l, m + L] (triangular
truncation; entries with |m| > l are structural zeros).
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Optional, Tuple, Union

import numpy as np
import scipy.fft

from config import InvalidArgumentError

logger = logging.getLogger(__name__)

SQRT_2PI = np.sqrt(2.0 * np.pi)
_MEAN_TOLERANCE = 1e-12


def _legendre_recurrence(nmax: int, x: np.ndarray) -> np.ndarray:
    """
    Sphere-orthonormal P_l^m(x) without the Condon-Shortley phase, shape
    (nmax, nmax, len(x)) indexed [m, l, j]. Accumulated in extended precision.
    """
    x = np.asarray(x, dtype=np.longdouble)
    vdm = np.zeros((nmax, nmax, x.size), dtype=np.longdouble)
    vdm[0, 0, :] = 1.0 / np.sqrt(np.longdouble(4.0) * np.pi)

    for l in range(1, nmax):
        vdm[l - 1, l, :] = np.sqrt(np.longdouble(2 * l + 1)) * x * vdm[l - 1, l - 1, :]
        vdm[l, l, :] = np.sqrt((2 * l + 1) * (1 + x) * (1 - x) / 2 / l) * vdm[l - 1, l - 1, :]

    for l in range(2, nmax):
        for m in range(0, l - 1):
            a = np.sqrt(np.longdouble((2 * l - 1) * (2 * l + 1)) / ((l - m) * (l + m)))
            b = np.sqrt(np.longdouble((l + m - 1) * (l - m - 1) * (2 * l + 1)) / ((l - m) * (l + m) * (2 * l - 3)))
            vdm[m, l, :] = a * x * vdm[m, l - 1, :] - b * vdm[m, l - 2, :]

    return vdm


def _legendre_tables(lmax: int, colat: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Signed-order tables P̄, dP̄/dθ and m P̄/sinθ, each (2L+1, L+1, nlat).

    The θ-derivative and the m/sinθ factor come from order-shifted
    recurrences so no division by sinθ is needed.
    """
    nlat = colat.size
    pct = _legendre_recurrence(lmax + 3, np.cos(colat))

    plm = np.zeros((lmax + 1, lmax + 1, nlat), dtype=np.longdouble)
    dplm = np.zeros_like(plm)
    mplm = np.zeros_like(plm)

    for l in range(lmax + 1):
        plm[: l + 1, l] = pct[: l + 1, l]

        dplm[0, l] = -np.sqrt(np.longdouble(l * (l + 1))) * pct[1, l]
        for m in range(1, l + 1):
            dplm[m, l] = 0.5 * (
                np.sqrt(np.longdouble((l + m) * (l - m + 1))) * pct[m - 1, l]
                - np.sqrt(np.longdouble((l - m) * (l + m + 1))) * pct[m + 1, l]
            )
            mplm[m, l] = 0.5 * np.sqrt(np.longdouble(2 * l + 1) / (2 * l + 3)) * (
                np.sqrt(np.longdouble((l - m + 1) * (l - m + 2))) * pct[m - 1, l + 1]
                + np.sqrt(np.longdouble((l + m + 1) * (l + m + 2))) * pct[m + 1, l + 1]
            )

    # Condon-Shortley phase
    phase = np.where(np.arange(lmax + 1) % 2 == 1, -1.0, 1.0).astype(np.longdouble)
    plm *= phase[:, None, None] * np.sqrt(np.longdouble(2.0) * np.pi)
    dplm *= phase[:, None, None] * np.sqrt(np.longdouble(2.0) * np.pi)
    mplm *= phase[:, None, None] * np.sqrt(np.longdouble(2.0) * np.pi)

    # negative orders: Y_l^{-m} = (-1)^m conj(Y_l^m)
    shape = (2 * lmax + 1, lmax + 1, nlat)
    legendre = np.zeros(shape)
    dlegendre = np.zeros(shape)
    mlegendre = np.zeros(shape)
    for m in range(lmax + 1):
        sign = (-1.0) ** m
        legendre[lmax + m] = plm[m]
        dlegendre[lmax + m] = dplm[m]
        mlegendre[lmax + m] = mplm[m]
        if m > 0:
            legendre[lmax - m] = sign * plm[m]
            dlegendre[lmax - m] = sign * dplm[m]
            mlegendre[lmax - m] = -sign * mplm[m]
    return legendre, dlegendre, mlegendre


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class GaussGrid:
    """Gauss-Legendre colatitudes by equispaced longitudes, with Legendre tables"""

    lmax: int
    nlat: int
    nlon: int
    colat: np.ndarray
    weights: np.ndarray
    lon: np.ndarray
    legendre: np.ndarray = field(repr=False)
    dlegendre: np.ndarray = field(repr=False)
    mlegendre: np.ndarray = field(repr=False)

    @property
    def mu(self) -> np.ndarray:
        return np.cos(self.colat)

    @property
    def sin_colat(self) -> np.ndarray:
        return np.sin(self.colat)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nlat, self.nlon)

    def tables(self, lmax: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Table slices for a truncation lmax ≤ grid.lmax"""
        if lmax > self.lmax:
            raise InvalidArgumentError(f"truncation {lmax} exceeds grid capacity {self.lmax}")
        rows = slice(self.lmax - lmax, self.lmax + lmax + 1)
        return (
            self.legendre[rows, : lmax + 1],
            self.dlegendre[rows, : lmax + 1],
            self.mlegendre[rows, : lmax + 1],
        )

    def orthonormality_residual(self) -> float:
        """max |Σ_j w_j P̄_l^m P̄_l'^m − δ_ll'| over all orders"""
        worst = 0.0
        for row in range(2 * self.lmax + 1):
            m = abs(row - self.lmax)
            table = self.legendre[row, m:]
            gram = (table * self.weights) @ table.T
            worst = max(worst, float(np.abs(gram - np.eye(gram.shape[0])).max()))
        return worst


@lru_cache(maxsize=32)
def build_grid(lmax: int, nlat: Optional[int] = None, nlon: Optional[int] = None) -> GaussGrid:
    """
    Build (and cache) the Gauss grid for truncation lmax.

    Defaults: nlat = L+1 and nlon = 2L+2 rounded up to an FFT-friendly size.
    Larger nlat/nlon give quadrature headroom for products of fields.
    """
    if int(lmax) != lmax or lmax < 1:
        raise InvalidArgumentError(f"lmax must be a positive integer, got {lmax}")
    lmax = int(lmax)
    nlat = lmax + 1 if nlat is None else int(nlat)
    nlon = scipy.fft.next_fast_len(2 * lmax + 2) if nlon is None else int(nlon)
    if nlat < lmax + 1:
        raise InvalidArgumentError(f"nlat must be at least lmax+1={lmax + 1}, got {nlat}")
    if nlon < 2 * lmax + 1:
        raise InvalidArgumentError(f"nlon must be at least 2*lmax+1={2 * lmax + 1}, got {nlon}")

    nodes, weights = np.polynomial.legendre.leggauss(nlat)
    # north to south
    colat = np.arccos(nodes[::-1])
    weights = weights[::-1].copy()
    lon = 2.0 * np.pi * np.arange(nlon) / nlon
    legendre, dlegendre, mlegendre = _legendre_tables(lmax, colat)

    logger.debug("built Gauss grid lmax=%d nlat=%d nlon=%d", lmax, nlat, nlon)
    return GaussGrid(
        lmax=lmax,
        nlat=nlat,
        nlon=nlon,
        colat=_readonly(colat),
        weights=_readonly(weights),
        lon=_readonly(lon),
        legendre=_readonly(legendre),
        dlegendre=_readonly(dlegendre),
        mlegendre=_readonly(mlegendre),
    )


def degree_index(lmax: int) -> np.ndarray:
    """Degree l of every entry of a (L+1, 2L+1) coefficient array"""
    return np.broadcast_to(np.arange(lmax + 1)[:, None], (lmax + 1, 2 * lmax + 1))


def order_index(lmax: int) -> np.ndarray:
    """Order m of every entry of a (L+1, 2L+1) coefficient array"""
    return np.broadcast_to(np.arange(-lmax, lmax + 1)[None, :], (lmax + 1, 2 * lmax + 1))


def triangular_mask(lmax: int) -> np.ndarray:
    return np.abs(order_index(lmax)) <= degree_index(lmax)


def hermitian_symmetrize(coeffs: np.ndarray) -> np.ndarray:
    """Impose ψ_l^{-m} = (-1)^m conj(ψ_l^m) from the m ≥ 0 half (last two axes)."""
    lmax = coeffs.shape[-2] - 1
    out = np.array(coeffs, dtype=complex)
    out[..., lmax] = out[..., lmax].real
    for m in range(1, lmax + 1):
        out[..., lmax - m] = (-1.0) ** m * np.conj(out[..., lmax + m])
    return out


@dataclass(frozen=True, eq=False)
class SpectralScalar:
    """Spherical-harmonic coefficients ψ_l^m of a scalar on S²"""

    lmax: int
    coeffs: np.ndarray
    real: bool = True

    def __post_init__(self):
        expected = (self.lmax + 1, 2 * self.lmax + 1)
        if self.coeffs.shape != expected:
            raise InvalidArgumentError(f"coefficient array shape {self.coeffs.shape} != {expected}")

    @classmethod
    def zeros(cls, lmax: int) -> "SpectralScalar":
        return cls(lmax, np.zeros((lmax + 1, 2 * lmax + 1), dtype=complex))

    @classmethod
    def from_modes(cls, modes: Dict[Tuple[int, int], complex], lmax: int) -> "SpectralScalar":
        """Coefficients from a {(l, m): value} mapping; realness is inferred."""
        coeffs = np.zeros((lmax + 1, 2 * lmax + 1), dtype=complex)
        for (l, m), value in modes.items():
            if l > lmax or abs(m) > l or l < 0:
                raise InvalidArgumentError(f"mode ({l}, {m}) outside triangular truncation {lmax}")
            coeffs[l, m + lmax] = value
        symmetric = hermitian_symmetrize(coeffs)
        scale = max(1.0, float(np.abs(coeffs).max()))
        real = bool(np.abs(symmetric - coeffs).max() <= 1e-14 * scale)
        return cls(lmax, coeffs, real=real)

    def __getitem__(self, key: Tuple[int, int]) -> complex:
        l, m = key
        if abs(m) > l or l > self.lmax:
            return 0j
        return complex(self.coeffs[l, m + self.lmax])

    def __add__(self, other: "SpectralScalar") -> "SpectralScalar":
        a, b = _common(self, other)
        return SpectralScalar(a.lmax, a.coeffs + b.coeffs, real=a.real and b.real)

    def __sub__(self, other: "SpectralScalar") -> "SpectralScalar":
        a, b = _common(self, other)
        return SpectralScalar(a.lmax, a.coeffs - b.coeffs, real=a.real and b.real)

    def __neg__(self) -> "SpectralScalar":
        return SpectralScalar(self.lmax, -self.coeffs, real=self.real)

    def __mul__(self, factor: complex) -> "SpectralScalar":
        real = self.real and np.imag(factor) == 0
        return SpectralScalar(self.lmax, self.coeffs * factor, real=real)

    __rmul__ = __mul__

    @property
    def mean_coefficient(self) -> complex:
        return complex(self.coeffs[0, self.lmax])

    def with_lmax(self, lmax: int) -> "SpectralScalar":
        """Truncate or zero-pad to another triangular truncation"""
        out = np.zeros((lmax + 1, 2 * lmax + 1), dtype=complex)
        keep = min(lmax, self.lmax)
        out[: keep + 1, lmax - keep : lmax + keep + 1] = self.coeffs[: keep + 1, self.lmax - keep : self.lmax + keep + 1]
        return SpectralScalar(lmax, out, real=self.real)

    def zonal(self) -> "SpectralScalar":
        """m = 0 restriction"""
        out = np.zeros_like(self.coeffs)
        out[:, self.lmax] = self.coeffs[:, self.lmax]
        return SpectralScalar(self.lmax, out, real=self.real)

    def without_mean(self) -> "SpectralScalar":
        out = self.coeffs.copy()
        out[0, self.lmax] = 0.0
        return SpectralScalar(self.lmax, out, real=self.real)

    def map_degrees(self, factors: np.ndarray) -> "SpectralScalar":
        """Multiply degree l by factors[l]"""
        return SpectralScalar(self.lmax, self.coeffs * np.asarray(factors)[:, None], real=self.real)


def _common(a: SpectralScalar, b: SpectralScalar) -> Tuple[SpectralScalar, SpectralScalar]:
    lmax = max(a.lmax, b.lmax)
    return a.with_lmax(lmax), b.with_lmax(lmax)


@dataclass(frozen=True, eq=False)
class GridScalar:
    """Scalar values f(θ_j, φ_k) on a Gauss grid"""

    grid: GaussGrid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.grid.shape:
            raise InvalidArgumentError(f"grid values shape {self.values.shape} != {self.grid.shape}")
        if not np.all(np.isfinite(self.values)):
            raise InvalidArgumentError("grid values contain non-finite entries")


def real_harmonic(l: int, m: int, lmax: int) -> SpectralScalar:
    """Unit-norm real harmonic: √2 Re Y_l^m for m > 0, √2 Im Y_l^|m| for m < 0"""
    if m == 0:
        return SpectralScalar.from_modes({(l, 0): 1.0}, lmax)
    k = abs(m)
    s = (-1.0) ** k
    if m > 0:
        modes = {(l, k): 1 / np.sqrt(2), (l, -k): s / np.sqrt(2)}
    else:
        modes = {(l, k): -1j / np.sqrt(2), (l, -k): s * 1j / np.sqrt(2)}
    return SpectralScalar.from_modes(modes, lmax)


# --- array-level transforms (leading batch axes allowed) ---------------------


def _fourier_orders(values: np.ndarray, grid: GaussGrid, lmax: int) -> np.ndarray:
    """√(2π)/nlon · DFT along φ, restricted to orders -lmax..lmax -> (..., nlat, 2L+1)"""
    spectrum = scipy.fft.fft(values, axis=-1) * (SQRT_2PI / grid.nlon)
    orders = np.arange(-lmax, lmax + 1) % grid.nlon
    return spectrum[..., orders]


def _from_fourier_orders(columns: np.ndarray, grid: GaussGrid, lmax: int) -> np.ndarray:
    """Inverse of _fourier_orders for columns (..., nlat, 2L+1)"""
    spectrum = np.zeros(columns.shape[:-1] + (grid.nlon,), dtype=complex)
    spectrum[..., np.arange(-lmax, lmax + 1) % grid.nlon] = columns
    return scipy.fft.ifft(spectrum, axis=-1) * (grid.nlon / SQRT_2PI)


def analyze_values(values: np.ndarray, grid: GaussGrid, lmax: Optional[int] = None) -> np.ndarray:
    """Quadrature coefficients of grid values (..., nlat, nlon) -> (..., L+1, 2L+1)"""
    lmax = grid.lmax if lmax is None else lmax
    legendre, _, _ = grid.tables(lmax)
    columns = _fourier_orders(values, grid, lmax) * grid.weights[:, None]
    coeffs = np.einsum("...jm,mlj->...lm", columns, legendre)
    if np.isrealobj(values):
        coeffs = hermitian_symmetrize(coeffs)
    return coeffs


def synthesize_coeffs(coeffs: np.ndarray, grid: GaussGrid) -> np.ndarray:
    """Evaluate coefficient arrays (..., L+1, 2L+1) on the grid"""
    lmax = coeffs.shape[-2] - 1
    legendre, _, _ = grid.tables(lmax)
    columns = np.einsum("...lm,mlj->...jm", coeffs, legendre)
    return _from_fourier_orders(columns, grid, lmax)


def synthesize_gradient(coeffs: np.ndarray, grid: GaussGrid) -> Tuple[np.ndarray, np.ndarray]:
    """(∂_θ f, (1/sinθ) ∂_φ f) on the grid"""
    lmax = coeffs.shape[-2] - 1
    _, dlegendre, mlegendre = grid.tables(lmax)
    d_theta = np.einsum("...lm,mlj->...jm", coeffs, dlegendre)
    d_phi = 1j * np.einsum("...lm,mlj->...jm", coeffs, mlegendre)
    return _from_fourier_orders(d_theta, grid, lmax), _from_fourier_orders(d_phi, grid, lmax)


def analyze_divcurl(u_theta: np.ndarray, u_phi: np.ndarray, grid: GaussGrid, lmax: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Coefficients of div_h u and curl_h u by integration by parts against ∇Y.

    Exact for tangent fields whose Hodge potentials are band-limited to the
    grid's quadrature degree.
    """
    lmax = grid.lmax if lmax is None else lmax
    _, dlegendre, mlegendre = grid.tables(lmax)
    ut = _fourier_orders(u_theta, grid, lmax) * grid.weights[:, None]
    up = _fourier_orders(u_phi, grid, lmax) * grid.weights[:, None]
    div = -np.einsum("...jm,mlj->...lm", ut, dlegendre) + 1j * np.einsum("...jm,mlj->...lm", up, mlegendre)
    curl = -np.einsum("...jm,mlj->...lm", up, dlegendre) - 1j * np.einsum("...jm,mlj->...lm", ut, mlegendre)
    if np.isrealobj(u_theta) and np.isrealobj(u_phi):
        div = hermitian_symmetrize(div)
        curl = hermitian_symmetrize(curl)
    return div, curl


# --- public operations --------------------------------------------------------


def analyze(f: GridScalar, grid: GaussGrid, lmax: Optional[int] = None) -> SpectralScalar:
    """ψ_l^m = ⟨f, Y_l^m⟩ by Gauss-Fourier quadrature"""
    if f.values.shape != grid.shape:
        raise InvalidArgumentError(f"field shape {f.values.shape} does not match grid {grid.shape}")
    lmax = grid.lmax if lmax is None else lmax
    coeffs = analyze_values(f.values, grid, lmax)
    return SpectralScalar(lmax, coeffs, real=bool(np.isrealobj(f.values)))


def synthesize(c: SpectralScalar, grid: GaussGrid) -> GridScalar:
    """Pointwise evaluation of the truncated series"""
    if c.lmax > grid.lmax:
        raise InvalidArgumentError(f"truncation {c.lmax} exceeds grid capacity {grid.lmax}")
    values = synthesize_coeffs(c.coeffs, grid)
    return GridScalar(grid, values.real.copy() if c.real else values)


def laplace_beltrami(c: SpectralScalar) -> SpectralScalar:
    l = np.arange(c.lmax + 1)
    return c.map_degrees(-(l * (l + 1.0)))


def inverse_laplace_beltrami(c: SpectralScalar) -> SpectralScalar:
    """Δ_h^{-1} on the zero-mean subspace; the l = 0 entry is dropped"""
    l = np.arange(c.lmax + 1)
    factors = np.zeros(c.lmax + 1)
    factors[1:] = -1.0 / (l[1:] * (l[1:] + 1.0))
    return c.map_degrees(factors)


def fractional_laplacian(c: SpectralScalar, alpha: float) -> SpectralScalar:
    """(−Δ_h)^α on zero-mean scalars"""
    l = np.arange(c.lmax + 1)
    factors = np.zeros(c.lmax + 1)
    factors[1:] = (l[1:] * (l[1:] + 1.0)) ** alpha
    return c.map_degrees(factors)


def sobolev_weights(lmax: int, alpha: float) -> np.ndarray:
    """(l² + l)^α per degree, zero at l = 0"""
    l = np.arange(lmax + 1, dtype=float)
    weights = np.zeros(lmax + 1)
    weights[1:] = (l[1:] * (l[1:] + 1.0)) ** alpha
    return weights


def scalar_sobolev_norm(c: SpectralScalar, alpha: float) -> float:
    """√(Σ_{l≥1} (l²+l)^α |ψ_l^m|²); the mean is included only at α = 0"""
    mean = abs(c.mean_coefficient)
    if alpha != 0 and mean > _MEAN_TOLERANCE * max(1.0, float(np.abs(c.coeffs).max())):
        raise InvalidArgumentError(f"H^{alpha} norm requires a zero-mean scalar (|ψ_0^0| = {mean:.3e})")
    weights = sobolev_weights(c.lmax, alpha)
    if alpha == 0:
        weights[0] = 1.0
    total = np.sum(weights[:, None] * np.abs(c.coeffs) ** 2)
    return float(np.sqrt(total))


def l2_inner(c: SpectralScalar, d: SpectralScalar) -> complex:
    """⟨c, d⟩_{L²(S²)} = Σ ψ_l^m conj(d_l^m)"""
    a, b = _common(c, d)
    return complex(np.sum(a.coeffs * np.conj(b.coeffs)))


def sobolev_interpolation_gap(c: SpectralScalar, alpha: float, alpha_lo: float, alpha_hi: float) -> float:
    """
    ‖c‖_{H^lo}^θ ‖c‖_{H^hi}^{1−θ} − ‖c‖_{H^α} with α = θ·lo + (1−θ)·hi.

    Nonnegative by Hölder on the spectral sums.
    """
    if not alpha_lo <= alpha <= alpha_hi or alpha_lo == alpha_hi:
        raise InvalidArgumentError(f"alpha={alpha} must lie in [{alpha_lo}, {alpha_hi}] with a nondegenerate range")
    theta = (alpha_hi - alpha) / (alpha_hi - alpha_lo)
    lo = scalar_sobolev_norm(c, alpha_lo)
    hi = scalar_sobolev_norm(c, alpha_hi)
    return lo ** theta * hi ** (1.0 - theta) - scalar_sobolev_norm(c, alpha)


def grid_integral(f: GridScalar) -> Union[float, complex]:
    """∫_{S²} f dΩ by Gauss-Legendre in μ and the trapezoid rule in φ; real for real values"""
    grid = f.grid
    total = np.sum(f.values * grid.weights[:, None]) * (2.0 * np.pi / grid.nlon)
    return complex(total).real if np.isrealobj(f.values) else complex(total)


def random_scalar(rng: np.random.Generator, lmax: int, lmin: int = 1, ltop: Optional[int] = None) -> SpectralScalar:
    """Real random scalar with Gaussian coefficients on lmin ≤ l ≤ ltop"""
    ltop = lmax if ltop is None else ltop
    coeffs = rng.standard_normal((lmax + 1, 2 * lmax + 1)) + 1j * rng.standard_normal((lmax + 1, 2 * lmax + 1))
    l = degree_index(lmax)
    coeffs = np.where(triangular_mask(lmax) & (l >= lmin) & (l <= ltop), coeffs, 0.0)
    return SpectralScalar(lmax, hermitian_symmetrize(coeffs))
