"""
Rotating MHD on the periodic box in the wave-operator form

    ∂_t (u, b) + (P(u·∇u − b·∇b), u·∇b − b·∇u) = (1/ε) 𝓛(u, b),
    𝓛(u, b) = (−curl Δ^{-1} ∂_z u + ∂_z b, ∂_z u).

𝓛 acts per wavevector as a 6×6 skew-Hermitian block, exponentiated exactly
together with the running time integral; the nonlinearity is advanced by RK4
in Lawson form with 2/3-rule dealiasing.
"""
import logging
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import List, Literal, NamedTuple, Tuple

import numpy as np
import scipy.linalg
from pydantic import BaseModel, Field, model_validator

from config import InvalidArgumentError, NumericFailureError, settings
from .box import (
    BoxGrid,
    curl_hat,
    dz_hat,
    inner_box,
    kernel_project,
    project_leray_box,
    sobolev_norm_box,
    winf_norm,
    wms_norm,
)

logger = logging.getLogger(__name__)


class MhdRunConfig(BaseModel):
    """Parameters of one rotating-MHD box run"""

    n: int = Field(32, ge=8)
    k: int = Field(3, ge=3)
    epsilon: float = Field(0.1, gt=0)
    T: float = Field(1.0, ge=0)
    dt: float = Field(0.01, gt=0)
    seed: int = 0
    M0: float = Field(1.0, gt=0)
    s: float = Field(12.0, gt=6)
    init_kmax: int = Field(4, ge=1)
    initial: Literal["random", "kernel"] = "random"
    nonlinear: bool = True
    hyperviscosity: float = Field(0.0, ge=0)
    record_every: int = Field(1, ge=1)

    class Config:
        extra = "forbid"

    @model_validator(mode="after")
    def _check_window(self):
        if self.n % 2:
            raise ValueError(f"box resolution n={self.n} must be even")
        if 0 < self.T < self.dt:
            raise ValueError(f"T={self.T} must be at least dt={self.dt}")
        if self.init_kmax >= self.n / 3:
            raise ValueError(f"init_kmax={self.init_kmax} must stay inside the dealiased band n/3")
        return self


@dataclass(frozen=True, eq=False)
class MhdState:
    """Fourier coefficients (3, n, n, n/2+1) of u, b and their running time integrals"""

    grid: BoxGrid
    u_hat: np.ndarray
    b_hat: np.ndarray
    epsilon: float
    t: float = 0.0
    accum_u: np.ndarray = field(default=None, repr=False)
    accum_b: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        shape = (3,) + self.grid.spectral_shape
        for name in ("u_hat", "b_hat"):
            if getattr(self, name).shape != shape:
                raise InvalidArgumentError(f"{name} shape {getattr(self, name).shape} != {shape}")
        if self.epsilon <= 0:
            raise InvalidArgumentError(f"Rossby number must be positive, got {self.epsilon}")
        for name in ("accum_u", "accum_b"):
            if getattr(self, name) is None:
                object.__setattr__(self, name, np.zeros(shape, dtype=complex))

    def divergence_residual(self) -> float:
        xi = self.grid.xi
        scale = max(1.0, float(np.abs(self.u_hat).max()), float(np.abs(self.b_hat).max()))
        worst = max(
            float(np.abs(np.sum(xi * self.u_hat, axis=0)).max()),
            float(np.abs(np.sum(xi * self.b_hat, axis=0)).max()),
        )
        return worst / scale


class MhdRecord(NamedTuple):
    time_integral_u: np.ndarray
    time_integral_b: np.ndarray
    wave_defect: float
    dzu_Hk1: float
    dz_curl_b_Hk2: float
    u_int_Winf: float
    b_int_Wks: float
    curl_b_Winf: float
    kernel_component_L2: float
    hls_ratio: float
    times: List[float]
    energy_history: List[float]
    final: MhdState


# --- wave operator ----------------------------------------------------------------------


def _cross_matrix(xi: np.ndarray) -> np.ndarray:
    """[ξ]× with [ξ]× v = ξ × v; xi has shape (3, ...) and the result (..., 3, 3)"""
    zero = np.zeros_like(xi[0])
    rows = [
        [zero, -xi[2], xi[1]],
        [xi[2], zero, -xi[0]],
        [-xi[1], xi[0], zero],
    ]
    return np.moveaxis(np.array(rows), (0, 1), (-2, -1))


def wave_mode_matrix(xi: np.ndarray) -> np.ndarray:
    """
    6×6 symbol of 𝓛 at one or many wavevectors ξ (leading axis of length 3):

        [[−(ξ₃/|ξ|²)[ξ]×, iξ₃ I],
         [iξ₃ I,            0  ]]
    """
    xi = np.asarray(xi, dtype=float)
    xi_sq = np.sum(xi ** 2, axis=0)
    inverse = np.divide(1.0, xi_sq, out=np.zeros_like(xi_sq), where=xi_sq > 0)
    shape = xi_sq.shape + (6, 6)
    matrix = np.zeros(shape, dtype=complex)
    eye = np.eye(3)
    matrix[..., :3, :3] = -(xi[2] * inverse)[..., None, None] * _cross_matrix(xi)
    matrix[..., :3, 3:] = 1j * xi[2][..., None, None] * eye
    matrix[..., 3:, :3] = 1j * xi[2][..., None, None] * eye
    return matrix


def wave_operator(u_hat: np.ndarray, b_hat: np.ndarray, grid: BoxGrid) -> Tuple[np.ndarray, np.ndarray]:
    """𝓛(u, b) per mode"""
    lu = -(grid.xi[2] * grid.inverse_xi_sq) * np.cross(grid.xi, u_hat, axis=0) + dz_hat(b_hat, grid)
    lb = dz_hat(u_hat, grid)
    return lu, lb


def apply_wave_operator(s: MhdState) -> Tuple[np.ndarray, np.ndarray]:
    return wave_operator(s.u_hat, s.b_hat, s.grid)


@lru_cache(maxsize=8)
def _propagators(n: int, epsilon: float, dt: float, hyperviscosity: float) -> Tuple[np.ndarray, np.ndarray, Tuple[np.ndarray, ...]]:
    """
    exp(G dt) and exp(G dt/2) for G = [[𝓛/ε − ν|ξ|⁴, 0], [I, 0]] on the
    dealiased modes, as (modes, 12, 12) stacks, plus the mode index.
    """
    grid = BoxGrid.create(n)
    index = np.nonzero(grid.dealias)
    xi = grid.xi[(slice(None),) + index]
    generator = np.zeros((xi.shape[1], 12, 12), dtype=complex)
    generator[:, :6, :6] = wave_mode_matrix(xi) / epsilon
    if hyperviscosity:
        damping = hyperviscosity * np.sum(xi ** 2, axis=0) ** 2
        generator[:, :6, :6] -= damping[:, None, None] * np.eye(6)
    generator[:, 6:, :6] = np.eye(6)
    full = scipy.linalg.expm(generator * dt)
    half = scipy.linalg.expm(generator * (dt / 2.0))
    logger.debug("built %d mode propagators (n=%d eps=%g dt=%g)", xi.shape[1], n, epsilon, dt)
    return full, half, index


def _propagate(propagators: np.ndarray, index: Tuple[np.ndarray, ...], y: np.ndarray) -> np.ndarray:
    out = np.zeros_like(y)
    selected = y[(slice(None),) + index]
    out[(slice(None),) + index] = np.einsum("mij,jm->im", propagators, selected)
    return out


# --- nonlinearity ------------------------------------------------------------------------


def nonlinear_terms(u_hat: np.ndarray, b_hat: np.ndarray, grid: BoxGrid) -> Tuple[np.ndarray, np.ndarray]:
    """
    (−P(ω × u − j × b), curl(u × b)) with ω = curl u, j = curl b, evaluated
    pseudo-spectrally on dealiased inputs.
    """
    mask = grid.dealias
    u_hat = u_hat * mask
    b_hat = b_hat * mask
    u = grid.inverse(u_hat)
    b = grid.inverse(b_hat)
    vorticity = grid.inverse(curl_hat(u_hat, grid))
    current = grid.inverse(curl_hat(b_hat, grid))
    force = grid.forward(np.cross(vorticity, u, axis=0) - np.cross(current, b, axis=0))
    induction = curl_hat(grid.forward(np.cross(u, b, axis=0)), grid)
    return -project_leray_box(force, grid) * mask, induction * mask


def mhd_rhs(s: MhdState, nonlinear: bool = True) -> Tuple[np.ndarray, np.ndarray]:
    """Full tendency: nonlinear terms plus (1/ε)𝓛(u, b)"""
    lu, lb = apply_wave_operator(s)
    du, db = lu / s.epsilon, lb / s.epsilon
    if nonlinear:
        nu, nb = nonlinear_terms(s.u_hat, s.b_hat, s.grid)
        du, db = du + nu, db + nb
    return du, db


# --- diagnostics ------------------------------------------------------------------------------


def energy(s: MhdState) -> float:
    """‖u‖² + ‖b‖² in L² of the box"""
    return inner_box(s.u_hat, s.u_hat, s.grid) + inner_box(s.b_hat, s.b_hat, s.grid)


def pair_sobolev_norm(u_hat: np.ndarray, b_hat: np.ndarray, sigma: float, grid: BoxGrid) -> float:
    return float(np.hypot(sobolev_norm_box(u_hat, sigma, grid), sobolev_norm_box(b_hat, sigma, grid)))


def hls_exponent(s: float) -> float:
    """p with 1/p = 1/3 + 1/s, so that 3p/(3 − p) = s"""
    return 1.0 / (1.0 / 3.0 + 1.0 / s)


def hls_ratio(b_hat: np.ndarray, m: int, s: float, grid: BoxGrid) -> float:
    """
    ‖b‖_{W^{m,s}} / (‖curl b‖_{W^{m,2}}^{2/p} ‖curl b‖_{W^{m,∞}}^{1−2/p})
    with 1/p = 1/3 + 1/s.
    """
    p = hls_exponent(s)
    current = curl_hat(b_hat, grid)
    denominator = wms_norm(current, m, 2.0, grid) ** (2.0 / p) * winf_norm(current, m, grid) ** (1.0 - 2.0 / p)
    if denominator == 0.0:
        return 0.0
    return wms_norm(b_hat, m, s, grid) / denominator


# --- solver ------------------------------------------------------------------------------------


class MhdSolver:
    """Integrates one MhdRunConfig"""

    def __init__(self, cfg: MhdRunConfig):
        self.cfg = cfg
        self.grid = BoxGrid.create(cfg.n)

    def random_state(self) -> MhdState:
        """Divergence-free, zero-mean, band-limited (u₀, b₀) with ‖(u₀, b₀)‖_{H^k} = M₀"""
        cfg = self.cfg
        grid = self.grid
        rng = np.random.default_rng(cfg.seed)
        band = np.all(np.abs(grid.xi) <= cfg.init_kmax, axis=0) & (grid.xi_sq > 0)
        if cfg.initial == "kernel":
            band &= grid.xi[2] == 0
        shape = (3,) + grid.spectral_shape

        def draw() -> np.ndarray:
            spectrum = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * band
            spectrum = spectrum / (1.0 + grid.xi_sq) ** (cfg.k / 2.0)
            real = grid.forward(grid.inverse(spectrum))
            return project_leray_box(real, grid) * band

        u_hat, b_hat = draw(), draw()
        scale = cfg.M0 / pair_sobolev_norm(u_hat, b_hat, cfg.k, grid)
        return MhdState(grid=grid, u_hat=u_hat * scale, b_hat=b_hat * scale, epsilon=cfg.epsilon)

    def _tendency(self, y: np.ndarray) -> np.ndarray:
        k = np.zeros_like(y)
        if self.cfg.nonlinear:
            k[0:3], k[3:6] = nonlinear_terms(y[0:3], y[3:6], self.grid)
        return k

    def step(self, s: MhdState, dt: float) -> MhdState:
        """One Lawson RK4 step; the time integrals ride along in the exponential"""
        if dt <= 0:
            raise InvalidArgumentError(f"time step must be positive, got {dt}")
        full, half, index = _propagators(self.grid.n, float(s.epsilon), float(dt), float(self.cfg.hyperviscosity))
        y = np.concatenate([s.u_hat, s.b_hat, s.accum_u, s.accum_b]).astype(complex)

        k1 = self._tendency(y)
        k2 = self._tendency(_propagate(half, index, y + 0.5 * dt * k1))
        half_y = _propagate(half, index, y)
        k3 = self._tendency(half_y + 0.5 * dt * k2)
        full_y = _propagate(full, index, y)
        k4 = self._tendency(full_y + dt * _propagate(half, index, k3))
        y_next = full_y + (dt / 6.0) * (
            _propagate(full, index, k1) + 2.0 * _propagate(half, index, k2 + k3) + k4
        )

        after = replace(
            s,
            u_hat=y_next[0:3],
            b_hat=y_next[3:6],
            accum_u=y_next[6:9],
            accum_b=y_next[9:12],
            t=s.t + dt,
        )
        before, now = energy(s), energy(after)
        if now > settings.blowup_factor * before:
            raise NumericFailureError(f"energy grew from {before:.6g} to {now:.6g} in one step", time=after.t)
        return after

    def run(self) -> MhdRecord:
        cfg = self.cfg
        grid = self.grid
        state = self.random_state()
        steps = int(round(cfg.T / cfg.dt))
        dt = cfg.T / steps if steps else cfg.dt
        times, energies = [state.t], [energy(state)]
        logger.info("mhd run eps=%g n=%d T=%g steps=%d", cfg.epsilon, cfg.n, cfg.T, steps)
        for n in range(1, steps + 1):
            try:
                state = self.step(state, dt)
            except NumericFailureError:
                logger.error("mhd run failed at step %d (eps=%g)", n, cfg.epsilon)
                raise
            if n % cfg.record_every == 0 or n == steps:
                times.append(state.t)
                energies.append(energy(state))
            logger.debug("step %d t=%.4f energy=%.12g", n, state.t, energies[-1])
        return self._summarize(state, times, energies)

    def _summarize(self, state: MhdState, times: List[float], energies: List[float]) -> MhdRecord:
        cfg = self.cfg
        grid = self.grid
        k = cfg.k
        order = max(k - 4, 0)
        integral_u, integral_b = state.accum_u, state.accum_b
        lu, lb = wave_operator(integral_u, integral_b, grid)
        kernel_u, waves_u = kernel_project(integral_u, grid)
        kernel_b, waves_b = kernel_project(integral_b, grid)
        ratio = hls_ratio(waves_b, order, cfg.s, grid)
        if ratio > settings.hls_constant:
            logger.warning("HLS ratio %.3g exceeds constant %g (eps=%g)", ratio, settings.hls_constant, cfg.epsilon)
        return MhdRecord(
            time_integral_u=integral_u,
            time_integral_b=integral_b,
            wave_defect=pair_sobolev_norm(lu, lb, k - 1, grid),
            dzu_Hk1=sobolev_norm_box(dz_hat(integral_u, grid), k - 1, grid),
            dz_curl_b_Hk2=sobolev_norm_box(dz_hat(curl_hat(integral_b, grid), grid), k - 2, grid),
            u_int_Winf=winf_norm(waves_u, k - 3, grid),
            b_int_Wks=wms_norm(waves_b, order, cfg.s, grid),
            curl_b_Winf=winf_norm(curl_hat(waves_b, grid), order, grid),
            kernel_component_L2=pair_sobolev_norm(kernel_u, kernel_b, 0.0, grid),
            hls_ratio=ratio,
            times=times,
            energy_history=energies,
            final=state,
        )


def random_state(grid: BoxGrid, cfg: MhdRunConfig) -> MhdState:
    if grid.n != cfg.n:
        raise InvalidArgumentError(f"box resolution {grid.n} does not match config n={cfg.n}")
    return MhdSolver(cfg).random_state()


def step_mhd(s: MhdState, dt: float, nonlinear: bool = True, hyperviscosity: float = 0.0) -> MhdState:
    cfg = MhdRunConfig(n=s.grid.n, epsilon=s.epsilon, nonlinear=nonlinear, hyperviscosity=hyperviscosity, init_kmax=1)
    return MhdSolver(cfg).step(s, dt)


def run_mhd(cfg: MhdRunConfig) -> MhdRecord:
    return MhdSolver(cfg).run()
