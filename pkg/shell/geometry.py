"""
Spherical-shell geometry (1−δ, 1+δ) × S² and the field containers living on it.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Tuple

import numpy as np
from numpy.polynomial import chebyshev

from config import InvalidArgumentError
from spectral import GaussGrid, GridScalar, GridTangent, build_grid

logger = logging.getLogger(__name__)


class Side(str, Enum):
    """Boundary sphere of the shell"""
    INNER = "inner"
    OUTER = "outer"


@lru_cache(maxsize=16)
def chebyshev_lobatto(nr: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Ascending Chebyshev-Gauss-Lobatto nodes on [-1, 1] with the collocation
    differentiation matrix and Clenshaw-Curtis weights.
    """
    degree = nr - 1
    x = -np.cos(np.pi * np.arange(nr) / degree)
    vander = chebyshev.chebvander(x, degree)
    # derivative of each basis polynomial T_k, evaluated at the nodes
    dvander = np.column_stack([
        chebyshev.chebval(x, chebyshev.chebder(np.eye(nr)[k])) for k in range(nr)
    ])
    diff = np.linalg.solve(vander.T, dvander.T).T

    moments = np.zeros(nr)
    even = np.arange(0, nr, 2)
    moments[even] = 2.0 / (1.0 - even.astype(float) ** 2)
    weights = np.linalg.solve(vander.T, moments)
    return x, diff, weights


@dataclass(frozen=True, eq=False)
class ShellGeometry:
    """Radial Chebyshev nodes by a Gauss surface grid"""

    delta: float
    nr: int
    lmax: int
    radii: np.ndarray
    diff: np.ndarray = field(repr=False)
    radial_weights: np.ndarray = field(repr=False)
    grid: GaussGrid = field(repr=False)

    @classmethod
    def create(cls, delta: float, nr: int, lmax: int) -> "ShellGeometry":
        """
        Fields on the shell are band-limited to lmax; the surface grid keeps
        one extra degree so Cartesian components are represented exactly.
        """
        if not 0.0 < delta < 0.5:
            raise InvalidArgumentError(f"shell half-thickness must lie in (0, 1/2), got {delta}")
        if nr < 4:
            raise InvalidArgumentError(f"need at least 4 radial nodes, got {nr}")
        if lmax < 1:
            raise InvalidArgumentError(f"lmax must be positive, got {lmax}")
        x, diff, weights = chebyshev_lobatto(nr)
        radii = 1.0 + delta * x
        radii[0], radii[-1] = 1.0 - delta, 1.0 + delta
        logger.debug("shell geometry delta=%g nr=%d lmax=%d", delta, nr, lmax)
        return cls(
            delta=float(delta),
            nr=int(nr),
            lmax=int(lmax),
            radii=radii,
            diff=diff / delta,
            radial_weights=weights * delta,
            grid=build_grid(lmax + 1),
        )

    @property
    def work_lmax(self) -> int:
        return self.grid.lmax

    @property
    def shape(self) -> Tuple[int, int, int]:
        return (self.nr,) + self.grid.shape

    def r(self) -> np.ndarray:
        """Radii broadcast against (nr, nlat, nlon) stacks"""
        return self.radii[:, None, None]

    def d_dr(self, values: np.ndarray) -> np.ndarray:
        return np.tensordot(self.diff, values, axes=(1, 0))

    def integrate_r(self, values: np.ndarray) -> np.ndarray:
        """∫ f dr over the shell thickness (Clenshaw-Curtis)"""
        return np.tensordot(self.radial_weights, values, axes=(0, 0))

    def boundary_index(self, side: Side) -> int:
        return self.nr - 1 if Side(side) is Side.OUTER else 0

    def boundary_sign(self, side: Side) -> float:
        return 1.0 if Side(side) is Side.OUTER else -1.0

    def volume_integral(self, density: np.ndarray) -> float:
        """∫_Ω f dV = ∫∫ f r² dr dΩ"""
        radial = self.integrate_r(density * self.r() ** 2)
        return float(np.sum(radial * self.grid.weights[:, None]) * (2.0 * np.pi / self.grid.nlon))

    def basis(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Cartesian components of (e_r, e_θ, e_φ), each (3, nlat, nlon)"""
        theta = self.grid.colat[:, None]
        phi = self.grid.lon[None, :]
        st, ct = np.sin(theta), np.cos(theta)
        sp, cp = np.sin(phi), np.cos(phi)
        zeros = np.zeros_like(st * sp)
        e_r = np.stack([st * cp, st * sp, ct * np.ones_like(phi)])
        e_theta = np.stack([ct * cp, ct * sp, -st * np.ones_like(phi)])
        e_phi = np.stack([-sp * np.ones_like(theta), cp * np.ones_like(theta), zeros])
        return e_r, e_theta, e_phi


@dataclass(frozen=True, eq=False)
class ShellScalar:
    geometry: ShellGeometry
    values: np.ndarray


@dataclass(frozen=True, eq=False)
class ShellField:
    """Radial-node stacks of (w, u_θ, u_φ) with w = u·e_r"""

    geometry: ShellGeometry
    w: np.ndarray
    u_theta: np.ndarray
    u_phi: np.ndarray

    def __post_init__(self):
        for name in ("w", "u_theta", "u_phi"):
            values = getattr(self, name)
            if values.shape != self.geometry.shape:
                raise InvalidArgumentError(f"{name} shape {values.shape} != shell shape {self.geometry.shape}")
            if not np.all(np.isfinite(values)):
                raise InvalidArgumentError(f"{name} contains non-finite entries")

    @classmethod
    def zeros(cls, geometry: ShellGeometry) -> "ShellField":
        z = np.zeros(geometry.shape)
        return cls(geometry, z, z.copy(), z.copy())

    def __add__(self, other: "ShellField") -> "ShellField":
        return ShellField(self.geometry, self.w + other.w, self.u_theta + other.u_theta, self.u_phi + other.u_phi)

    def __sub__(self, other: "ShellField") -> "ShellField":
        return ShellField(self.geometry, self.w - other.w, self.u_theta - other.u_theta, self.u_phi - other.u_phi)

    def __mul__(self, factor) -> "ShellField":
        return ShellField(self.geometry, self.w * factor, self.u_theta * factor, self.u_phi * factor)

    __rmul__ = __mul__

    def horizontal(self, index: int) -> GridTangent:
        return GridTangent(self.geometry.grid, self.u_theta[index], self.u_phi[index])

    def radial(self, index: int) -> GridScalar:
        return GridScalar(self.geometry.grid, self.w[index])

    def cartesian(self) -> np.ndarray:
        """(3, nr, nlat, nlon) Cartesian components"""
        e_r, e_theta, e_phi = self.geometry.basis()
        return e_r[:, None] * self.w + e_theta[:, None] * self.u_theta + e_phi[:, None] * self.u_phi

    @classmethod
    def from_cartesian(cls, geometry: ShellGeometry, components: np.ndarray) -> "ShellField":
        e_r, e_theta, e_phi = geometry.basis()
        w, u_theta, u_phi = (np.einsum("i...,ik...->k...", e, components) for e in (e_r, e_theta, e_phi))
        return cls(geometry, w, u_theta, u_phi)

    def max_abs(self) -> float:
        return float(np.sqrt(self.w ** 2 + self.u_theta ** 2 + self.u_phi ** 2).max())
