"""
Barotropic vorticity solver on the rotating unit sphere.

    ∂_t ζ + u·∇_h ζ + (1/ε) u·∇_h cosθ = μ Δ_h ζ + curl_h F_ext,   u = ∇_h^⊥ Δ_h^{-1} ζ

The stiff rotation term and viscosity are integrated exactly per zonal
wavenumber m (integrating factor), advection by classical RK4 in Lawson
form. The running time integral of the stream function is carried as an
extra block of the same linear system, so it is accumulated with the
scheme's own quadrature.
"""
import logging
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import List, Literal, NamedTuple, Tuple

import numpy as np
import scipy.linalg
from pydantic import BaseModel, Field, model_validator

from config import InvalidArgumentError, NumericFailureError, settings
from spectral import (
    GaussGrid,
    SpectralScalar,
    TangentField,
    analyze_values,
    build_grid,
    hermitian_symmetrize,
    random_scalar,
    real_harmonic,
    synthesize_coeffs,
    synthesize_gradient,
    vector_sobolev_norm,
    zonal_project_spectral,
)

logger = logging.getLogger(__name__)

_ADVECTIVE_CFL = 1.0


class ForcingMode(BaseModel):
    """One real harmonic of the forcing stream function ψ_F"""

    l: int = Field(ge=1)
    m: int
    amplitude: float

    @model_validator(mode="after")
    def _check_order(self):
        if abs(self.m) > self.l:
            raise ValueError(f"order m={self.m} exceeds degree l={self.l}")
        return self


class SphereRunConfig(BaseModel):
    """Parameters of one rotating-sphere run"""

    lmax: int = Field(31, ge=4)
    epsilon: float = Field(0.1, gt=0)
    mu: float = Field(0.0, ge=0)
    T: float = Field(1.0, ge=0)
    dt: float = Field(0.01, gt=0)
    seed: int = 0
    M0: float = Field(1.0, gt=0)
    alpha: float = -4.0
    initial: Literal["random", "zonal"] = "random"
    nonlinear: bool = True
    forcing: List[ForcingMode] = []
    record_every: int = Field(1, ge=1)

    class Config:
        extra = "forbid"

    @model_validator(mode="after")
    def _check_window(self):
        if 0 < self.T < self.dt:
            raise ValueError(f"T={self.T} must be at least dt={self.dt}")
        for mode in self.forcing:
            if mode.l > self.lmax:
                raise ValueError(f"forcing degree {mode.l} exceeds lmax={self.lmax}")
        return self


@dataclass(frozen=True, eq=False)
class SphereState:
    """
    Vorticity ζ, the running integral ∫ψ dt of the stream function, and the
    running integral of the advection tendency −u·∇ζ.
    """

    zeta: SpectralScalar
    epsilon: float
    mu: float
    t: float = 0.0
    accum: SpectralScalar = None
    advection_accum: SpectralScalar = field(default=None, repr=False)

    def __post_init__(self):
        if self.epsilon <= 0:
            raise InvalidArgumentError(f"Rossby number must be positive, got {self.epsilon}")
        if self.mu < 0:
            raise InvalidArgumentError(f"viscosity must be nonnegative, got {self.mu}")
        if self.accum is None:
            object.__setattr__(self, "accum", SpectralScalar.zeros(self.zeta.lmax))
        if self.advection_accum is None:
            object.__setattr__(self, "advection_accum", SpectralScalar.zeros(self.zeta.lmax))

    @property
    def lmax(self) -> int:
        return self.zeta.lmax

    @property
    def stream(self) -> SpectralScalar:
        return SpectralScalar(self.lmax, self.zeta.coeffs * _inverse_laplacian_factors(self.lmax)[:, None])

    @property
    def velocity(self) -> TangentField:
        return TangentField.rotational(self.stream)

    @property
    def time_integral(self) -> TangentField:
        return TangentField.rotational(self.accum)


class SphereRecord(NamedTuple):
    times: List[float]
    energy_history: List[float]
    defect_history: List[float]
    bound_history: List[float]
    initial_energy: float
    grad_integral: float
    a1_norm: float
    a2_norm: float
    a3_norm: float
    m_ext: float
    wave_identity_residual: float


class SphereRun(NamedTuple):
    final: SphereState
    time_integral: TangentField
    record: SphereRecord


# --- spectral factors and grids ----------------------------------------------------


@lru_cache(maxsize=8)
def _inverse_laplacian_factors(lmax: int) -> np.ndarray:
    l = np.arange(lmax + 1, dtype=float)
    factors = np.zeros(lmax + 1)
    factors[1:] = -1.0 / (l[1:] * (l[1:] + 1.0))
    factors.setflags(write=False)
    return factors


def _laplacian_factors(lmax: int) -> np.ndarray:
    l = np.arange(lmax + 1, dtype=float)
    return -l * (l + 1.0)


def dealias_grid(lmax: int) -> GaussGrid:
    """Quadrature exact for products of two degree-lmax fields projected back to lmax"""
    return build_grid(lmax, nlat=(3 * lmax + 1) // 2 + 1, nlon=3 * (lmax + 1))


def _orders(lmax: int):
    for column in range(2 * lmax + 1):
        m = column - lmax
        yield m, column, slice(abs(m), lmax + 1)


# --- linear part --------------------------------------------------------------------


def linear_operator_blocks(lmax: int, epsilon: float, mu: float) -> List[np.ndarray]:
    """
    Matrix of ζ ↦ −(1/ε) u·∇cosθ + μΔζ restricted to each order m, over the
    degrees |m| ≤ l ≤ lmax, evaluated on unit coefficient vectors by the
    transform pair.
    """
    grid = dealias_grid(lmax)
    inverse = _inverse_laplacian_factors(lmax)
    sin_theta = grid.sin_colat[:, None]
    blocks = []
    for m, column, degrees in _orders(lmax):
        size = lmax + 1 - abs(m)
        basis = np.zeros((size, lmax + 1, 2 * lmax + 1), dtype=complex)
        basis[np.arange(size), np.arange(abs(m), lmax + 1), column] = 1.0
        _, d_phi = synthesize_gradient(basis * inverse[:, None], grid)
        # u·∇cosθ = −sinθ u_θ = ∂_φ ψ
        coriolis = sin_theta * d_phi
        image = -analyze_values(coriolis, grid, lmax) / epsilon
        block = image[:, degrees, column].T
        block = block + mu * np.diag(_laplacian_factors(lmax)[degrees])
        blocks.append(block)
    return blocks


@lru_cache(maxsize=32)
def _propagators(lmax: int, epsilon: float, mu: float, dt: float) -> Tuple[Tuple[np.ndarray, ...], Tuple[np.ndarray, ...]]:
    """exp(G dt) and exp(G dt/2) per order for G = [[A, 0], [Δ^{-1}, 0]]"""
    inverse = _inverse_laplacian_factors(lmax)
    full, half = [], []
    for (m, _, degrees), block in zip(_orders(lmax), linear_operator_blocks(lmax, epsilon, mu)):
        size = block.shape[0]
        generator = np.zeros((2 * size, 2 * size), dtype=complex)
        generator[:size, :size] = block
        generator[size:, :size] = np.diag(inverse[degrees])
        full.append(scipy.linalg.expm(generator * dt))
        half.append(scipy.linalg.expm(generator * (dt / 2.0)))
    logger.debug("built %d order propagators (lmax=%d eps=%g mu=%g dt=%g)", len(full), lmax, epsilon, mu, dt)
    return tuple(full), tuple(half)


def _propagate(propagators: Tuple[np.ndarray, ...], y: np.ndarray) -> np.ndarray:
    """Apply per-order propagators to an augmented (2, L+1, 2L+1) array"""
    lmax = y.shape[1] - 1
    out = np.zeros_like(y)
    for (m, column, degrees), matrix in zip(_orders(lmax), propagators):
        vector = np.concatenate([y[0, degrees, column], y[1, degrees, column]])
        image = matrix @ vector
        size = lmax + 1 - abs(m)
        out[0, degrees, column] = image[:size]
        out[1, degrees, column] = image[size:]
    return out


# --- diagnostics --------------------------------------------------------------------


def energy(s: SphereState) -> float:
    """‖u‖²_{L²(S²)} = Σ |ζ_l^m|² / (l(l+1))"""
    weights = -_inverse_laplacian_factors(s.lmax)[:, None]
    return float(np.sum(weights * np.abs(s.zeta.coeffs) ** 2))


def enstrophy(s: SphereState) -> float:
    """‖ζ‖²_{L²(S²)}"""
    return float(np.sum(np.abs(s.zeta.coeffs) ** 2))


def grad_norm_sq(s: SphereState) -> float:
    """‖∇u‖² = ‖ζ‖² − ‖u‖² for divergence-free u on the unit sphere"""
    return enstrophy(s) - energy(s)


def max_speed(s: SphereState, grid: GaussGrid = None) -> float:
    grid = dealias_grid(s.lmax) if grid is None else grid
    d_theta, d_phi = synthesize_gradient(s.stream.coeffs, grid)
    return float(np.sqrt(d_theta.real ** 2 + d_phi.real ** 2).max())


def stable_dt(s: SphereState, grid: GaussGrid = None) -> float:
    """Advective step bound C / (lmax · max|u|); the rotation term imposes none"""
    speed = max_speed(s, grid)
    if speed == 0.0:
        return float("inf")
    return _ADVECTIVE_CFL / (s.lmax * speed)


def zonal_defect(ti: TangentField, alpha: float) -> float:
    """‖(1 − Π_zonal) ti‖_{H^α}"""
    return vector_sobolev_norm(ti - zonal_project_spectral(ti), alpha)


def wave_operator_stream(psi: SpectralScalar) -> SpectralScalar:
    """Stream function of L_h ∇^⊥ψ, namely Δ^{-1}(−∂_φ ψ)"""
    m = np.arange(-psi.lmax, psi.lmax + 1)[None, :]
    coeffs = _inverse_laplacian_factors(psi.lmax)[:, None] * (-1j * m) * psi.coeffs
    return SpectralScalar(psi.lmax, coeffs, real=psi.real)


def _rotational_norm(coeffs: np.ndarray, lmax: int, alpha: float) -> float:
    return vector_sobolev_norm(TangentField.rotational(SpectralScalar(lmax, coeffs)), alpha)


# --- solver ----------------------------------------------------------------------------


class SphereSolver:
    """Integrates one SphereRunConfig; caches its grid, forcing and propagators"""

    def __init__(self, cfg: SphereRunConfig):
        self.cfg = cfg
        self.lmax = cfg.lmax
        self.grid = dealias_grid(cfg.lmax)
        self.forcing_stream = self._forcing_stream()
        self.forcing_vorticity = self.forcing_stream.coeffs * _laplacian_factors(self.lmax)[:, None]
        self.forced = bool(np.any(self.forcing_stream.coeffs != 0))

    def _forcing_stream(self) -> SpectralScalar:
        psi = SpectralScalar.zeros(self.lmax)
        for mode in self.cfg.forcing:
            psi = psi + real_harmonic(mode.l, mode.m, self.lmax) * mode.amplitude
        return psi

    def init_state(self) -> SphereState:
        """Random band-limited vorticity on 2 ≤ l ≤ lmax/2 with ‖u₀‖ = M₀"""
        cfg = self.cfg
        rng = np.random.default_rng(cfg.seed)
        psi = random_scalar(rng, self.lmax, lmin=2, ltop=self.lmax // 2)
        if cfg.initial == "zonal":
            psi = psi.zonal()
        zeta = SpectralScalar(self.lmax, psi.coeffs * _laplacian_factors(self.lmax)[:, None])
        state = SphereState(zeta=zeta, epsilon=cfg.epsilon, mu=cfg.mu)
        scale = cfg.M0 / np.sqrt(energy(state))
        logger.debug("initial state seed=%d scale=%.6g", cfg.seed, scale)
        return replace(state, zeta=zeta * scale)

    def advection(self, zeta: np.ndarray) -> np.ndarray:
        """Coefficients of −u·∇ζ on the dealiasing grid"""
        psi = zeta * _inverse_laplacian_factors(self.lmax)[:, None]
        psi_theta, psi_phi = synthesize_gradient(psi, self.grid)
        zeta_theta, zeta_phi = synthesize_gradient(zeta, self.grid)
        # u = (−ψ_φ', ψ_θ)
        transport = -psi_phi.real * zeta_theta.real + psi_theta.real * zeta_phi.real
        return -analyze_values(transport, self.grid, self.lmax)

    def _tendency(self, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        advection = self.advection(y[0]) if self.cfg.nonlinear else np.zeros_like(y[0])
        k = np.zeros_like(y)
        k[0] = advection + self.forcing_vorticity
        return k, advection

    def step(self, s: SphereState, dt: float) -> SphereState:
        """One Lawson RK4 step of size dt"""
        if dt <= 0:
            raise InvalidArgumentError(f"time step must be positive, got {dt}")
        full, half = _propagators(self.lmax, float(s.epsilon), float(s.mu), float(dt))
        y = np.stack([s.zeta.coeffs, s.accum.coeffs]).astype(complex)

        k1, n1 = self._tendency(y)
        k2, n2 = self._tendency(_propagate(half, y + 0.5 * dt * k1))
        half_y = _propagate(half, y)
        k3, n3 = self._tendency(half_y + 0.5 * dt * k2)
        full_y = _propagate(full, y)
        k4, n4 = self._tendency(full_y + dt * _propagate(half, k3))

        y_next = full_y + (dt / 6.0) * (
            _propagate(full, k1) + 2.0 * _propagate(half, k2 + k3) + k4
        )
        advection = s.advection_accum.coeffs + (dt / 6.0) * (n1 + 2.0 * n2 + 2.0 * n3 + n4)

        after = replace(
            s,
            zeta=SpectralScalar(self.lmax, hermitian_symmetrize(y_next[0])),
            accum=SpectralScalar(self.lmax, hermitian_symmetrize(y_next[1])),
            advection_accum=SpectralScalar(self.lmax, hermitian_symmetrize(advection)),
            t=s.t + dt,
        )
        if not self.forced:
            before, now = energy(s), energy(after)
            if now > settings.blowup_factor * before:
                raise NumericFailureError(f"energy grew from {before:.6g} to {now:.6g} in one step", time=after.t)
        return after

    def run_accumulate(self) -> SphereRun:
        """Integrate to T, recording energy and the zonal defect of ∫u dt"""
        cfg = self.cfg
        state = self.init_state()
        initial = state
        steps = int(round(cfg.T / cfg.dt))
        dt = cfg.T / steps if steps else cfg.dt
        if steps and dt > stable_dt(state, self.grid):
            logger.warning("dt=%.3g exceeds the advective bound %.3g", dt, stable_dt(state, self.grid))

        times, energies, defects, bounds = [], [], [], []

        def record(s: SphereState):
            times.append(s.t)
            energies.append(energy(s))
            defects.append(zonal_defect(s.time_integral, cfg.alpha))
            bounds.append(_rotational_norm(wave_operator_stream(s.accum).coeffs, self.lmax, cfg.alpha + 2.0))

        record(state)
        grad_integral = 0.0
        logger.info("sphere run eps=%g mu=%g T=%g steps=%d", cfg.epsilon, cfg.mu, cfg.T, steps)
        for n in range(1, steps + 1):
            previous = grad_norm_sq(state)
            try:
                state = self.step(state, dt)
            except NumericFailureError:
                logger.error("sphere run failed at step %d (eps=%g)", n, cfg.epsilon)
                raise
            grad_integral += 0.5 * dt * (previous + grad_norm_sq(state))
            if n % cfg.record_every == 0 or n == steps:
                record(state)
            logger.debug("step %d t=%.4f energy=%.12g", n, state.t, energies[-1])

        return SphereRun(state, state.time_integral, self._summarize(initial, state, times, energies, defects, bounds, grad_integral))

    def _summarize(self, initial, final, times, energies, defects, bounds, grad_integral) -> SphereRecord:
        cfg = self.cfg
        lmax = self.lmax
        order = cfg.alpha + 2.0
        inverse = _inverse_laplacian_factors(lmax)[:, None]
        a1 = -inverse * final.advection_accum.coeffs
        a3 = -cfg.mu * _laplacian_factors(lmax)[:, None] * final.accum.coeffs
        forcing = final.t * self.forcing_stream.coeffs
        closure = final.stream.coeffs - initial.stream.coeffs + a1 + a3 - forcing
        residual = wave_operator_stream(final.accum).coeffs - cfg.epsilon * closure
        zonal = np.zeros_like(forcing)
        zonal[:, lmax] = forcing[:, lmax]
        return SphereRecord(
            times=times,
            energy_history=energies,
            defect_history=defects,
            bound_history=bounds,
            initial_energy=energy(initial),
            grad_integral=grad_integral,
            a1_norm=_rotational_norm(a1, lmax, order),
            a2_norm=0.0,
            a3_norm=_rotational_norm(a3, lmax, order),
            m_ext=_rotational_norm(forcing - zonal, lmax, order),
            wave_identity_residual=_rotational_norm(residual, lmax, order),
        )


# --- module-level operations ------------------------------------------------------------


def init_state(cfg: SphereRunConfig) -> SphereState:
    return SphereSolver(cfg).init_state()


def step(s: SphereState, dt: float, cfg: SphereRunConfig = None) -> SphereState:
    """Advance s by dt; cfg supplies forcing and the nonlinearity switch"""
    cfg = cfg or SphereRunConfig(lmax=s.lmax, epsilon=s.epsilon, mu=s.mu)
    if cfg.lmax != s.lmax:
        raise InvalidArgumentError(f"state truncation {s.lmax} does not match config lmax={cfg.lmax}")
    return SphereSolver(cfg).step(s, dt)


def run_accumulate(cfg: SphereRunConfig) -> SphereRun:
    return SphereSolver(cfg).run_accumulate()


def synthesize_velocity(s: SphereState, grid: GaussGrid) -> Tuple[np.ndarray, np.ndarray]:
    """(u_θ, u_φ) on a grid"""
    d_theta, d_phi = synthesize_gradient(s.stream.coeffs, grid)
    return -d_phi.real, d_theta.real


def synthesize_vorticity(s: SphereState, grid: GaussGrid) -> np.ndarray:
    return synthesize_coeffs(s.zeta.coeffs, grid).real
