"""
Newton-Cotes integration on a grid, and the expectation values built on it.

Composite Boole panels (four intervals each) cover the grid. When N - 1 is
not a multiple of four, the last one to three intervals use the closed rule
of matching width (trapezoid, Simpson, three-eighths).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exceptions import CollapseError, QuadratureError
from .grid import Grid
from .potential import PotentialSpec, sample_potential
from .stencil import WallPolicy, apply_laplacian_5pt

# Closed Newton-Cotes rules by panel width: (factor of h, point weights)
NEWTON_COTES = {
    1: (1 / 2, (1, 1)),
    2: (1 / 3, (1, 4, 1)),
    3: (3 / 8, (1, 3, 3, 1)),
    4: (2 / 45, (7, 32, 12, 32, 7)),
}
RULE_NAMES = {1: "trapezoid", 2: "simpson", 3: "three-eighths", 4: "boole"}

NORMALIZED_TOL = 1e-12
COLLAPSE_NORM2 = 1e-300


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Samples of psi on every grid point; both wall values are zero."""

    values: np.ndarray
    grid: Grid
    normalized: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.n_points,):
            raise QuadratureError(
                f"wavefunction has shape {values.shape}, grid has {self.grid.n_points} points"
            )
        if values[0] != 0.0 or values[-1] != 0.0:
            raise QuadratureError("wavefunction must vanish on both walls")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __neg__(self) -> "WaveFunction":
        return WaveFunction(-self.values, self.grid, self.normalized)

    @property
    def interior(self) -> np.ndarray:
        return self.values[1:-1]

    @classmethod
    def from_interior(cls, interior: np.ndarray, grid: Grid) -> "WaveFunction":
        values = np.zeros(grid.n_points)
        values[1:-1] = interior
        return cls(values, grid)


@lru_cache(maxsize=64)
def _unit_weights(n_points: int) -> np.ndarray:
    intervals = n_points - 1
    weights = np.zeros(n_points)
    start = 0
    panels, remainder = divmod(intervals, 4)
    widths = [4] * panels + ([remainder] if remainder else [])
    for width in widths:
        factor, coefficients = NEWTON_COTES[width]
        weights[start:start + width + 1] += factor * np.asarray(coefficients, dtype=float)
        start += width
    weights.setflags(write=False)
    return weights


def quadrature_weights(grid: Grid) -> np.ndarray:
    return grid.h * _unit_weights(grid.n_points)


def quadrature_order(grid: Grid) -> str:
    """Label of the rule actually applied, recorded with every result."""
    remainder = (grid.n_points - 1) % 4
    if remainder == 0:
        return "boole"
    return f"boole+{RULE_NAMES[remainder]}"


def integrate(f: np.ndarray, grid: Grid) -> float:
    f = np.asarray(f, dtype=float)
    if f.shape != (grid.n_points,):
        raise QuadratureError(f"integrand has shape {f.shape}, grid has {grid.n_points} points")
    return float(grid.h * np.dot(_unit_weights(grid.n_points), f))


def norm(psi: WaveFunction) -> float:
    return float(np.sqrt(integrate(psi.values * psi.values, psi.grid)))


def normalize(psi: WaveFunction) -> WaveFunction:
    norm2 = integrate(psi.values * psi.values, psi.grid)
    if not norm2 > COLLAPSE_NORM2:
        raise CollapseError(f"state collapsed (integral of psi^2 = {norm2:.3e})")
    return WaveFunction(psi.values / np.sqrt(norm2), psi.grid, normalized=True)


def overlap(u: WaveFunction, v: WaveFunction) -> float:
    if u.grid != v.grid:
        raise QuadratureError("overlap of wavefunctions on different grids")
    return integrate(u.values * v.values, u.grid)


def _require_normalized(psi: WaveFunction) -> None:
    if not psi.normalized:
        raise QuadratureError("expectation values need a normalized wavefunction")


def energy_expectation(
    psi: WaveFunction, spec: PotentialSpec, wall: WallPolicy = WallPolicy.IMAGE
) -> float:
    """Newton-Cotes estimate of <psi|H|psi> with the five-point D^2."""
    _require_normalized(psi)
    h_psi = np.zeros(psi.grid.n_points)
    h_psi[1:-1] = -0.5 * apply_laplacian_5pt(psi, wall=wall)
    h_psi += sample_potential(spec, psi.grid) * psi.values
    return integrate(psi.values * h_psi, psi.grid)


def rayleigh_quotient(
    psi: WaveFunction, spec: PotentialSpec, wall: WallPolicy = WallPolicy.IMAGE
) -> float:
    """Discrete psi^T H psi / psi^T psi with the five-point H.

    The kinetic part is summed by parts into squared differences, so the
    round-off stays at the level of the energy instead of growing as 1/h^2.
    """
    grid = psi.grid
    values = psi.values
    padded = np.concatenate(([0.0, 0.0], values, [0.0, 0.0]))
    first = np.diff(padded)
    second = padded[2:] - padded[:-2]
    quadratic = 16.0 * np.dot(first, first) - np.dot(second, second)
    if wall is WallPolicy.IMAGE:
        quadratic -= values[1] ** 2 + values[-2] ** 2
    kinetic = quadratic / (24.0 * grid.h * grid.h)
    potential = np.dot(sample_potential(spec, grid), values * values)
    weight = np.dot(values, values)
    if not weight > COLLAPSE_NORM2:
        raise CollapseError("Rayleigh quotient of a vanishing state")
    return float((kinetic + potential) / weight)


def position_moments(psi: WaveFunction, origin: float = 0.0) -> tuple[float, float]:
    """(<s^2>, <s^4>) of a normalized state, with s = x - origin."""
    _require_normalized(psi)
    density = psi.values * psi.values
    s = psi.grid.x - origin
    x2 = s * s
    return integrate(x2 * density, psi.grid), integrate(x2 * x2 * density, psi.grid)
