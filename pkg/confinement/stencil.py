"""
Five-point second derivative and the implicit propagator bands.

One imaginary-time step solves (I + dtau/2 H) psi' = (I - dtau/2 H) psi.
With the five-point D^2, the left operator is pentadiagonal with

    alpha = zeta = dtau / (48 h^2)
    beta = delta = -dtau / (3 h^2)
    gamma_j = 1 + 5 dtau / (8 h^2) + dtau/2 v(x_j)

and the right-hand side is xi = 2 psi - (left operator) psi.

Stencil rows next to a wall reach one point past it. ``WallPolicy`` decides
what that ghost value is.
"""

from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from .grid import Grid
from .pentasolve import PentaBands
from .potential import PotentialSpec, sample_potential


class WallPolicy(StrEnum):
    # odd continuation through the wall: psi(a - h) = 2 psi(a) - psi(a + h)
    IMAGE = "image"
    # ghost taken as 0
    ZERO = "zero"


def _values(psi) -> np.ndarray:
    return np.asarray(getattr(psi, "values", psi), dtype=float)


def ghosted(values: np.ndarray, wall: WallPolicy) -> np.ndarray:
    """Full vector with one ghost point on each side, length N + 2."""
    if wall is WallPolicy.IMAGE:
        left = 2.0 * values[0] - values[1]
        right = 2.0 * values[-1] - values[-2]
    else:
        left = right = 0.0
    return np.concatenate(([left], values, [right]))


def _shifted(values: np.ndarray, wall: WallPolicy):
    # psi_{j-2} .. psi_{j+2} for every interior j
    ext = ghosted(values, wall)
    m = len(values) - 2
    return tuple(ext[k:k + m] for k in range(5))


def apply_laplacian_5pt(psi, h: float | None = None, wall: WallPolicy = WallPolicy.IMAGE) -> np.ndarray:
    """D^2 psi at the interior points (length N - 2).

    ``psi`` is a WaveFunction, or a raw full-length vector together with ``h``.
    """
    values = _values(psi)
    if h is None:
        h = psi.grid.h
    s0, s1, s2, s3, s4 = _shifted(values, WallPolicy(wall))
    return (-s0 + 16.0 * s1 - 30.0 * s2 + 16.0 * s3 - s4) / (12.0 * h * h)


@dataclass(frozen=True)
class PropagatorCoefficients:
    """Closed-form band values at each interior point.

    The wall fold of the image policy is applied only when the bands are
    handed to the solver (``bands``), never to these values.
    """

    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    delta: np.ndarray
    zeta: np.ndarray
    dtau: float
    h: float
    wall: WallPolicy = WallPolicy.IMAGE

    def bands(self) -> PentaBands:
        gamma = self.gamma.copy()
        if self.wall is WallPolicy.IMAGE:
            # the ghost beyond each wall is minus the first interior value
            gamma[0] -= self.alpha[0]
            gamma[-1] -= self.zeta[-1]
        return PentaBands(self.alpha, self.beta, gamma, self.delta, self.zeta)


def assemble_coefficients(
    spec: PotentialSpec, grid: Grid, dtau: float, wall: WallPolicy = WallPolicy.IMAGE
) -> PropagatorCoefficients:
    if not dtau > 0:
        raise ValueError(f"dtau must be positive, got {dtau}")
    h = grid.h
    ratio = dtau / (h * h)
    m = grid.n_interior
    v = sample_potential(spec, grid)[1:-1]

    outer = np.full(m, ratio / 48.0)
    inner = np.full(m, -ratio / 3.0)
    gamma = 1.0 + 5.0 * ratio / 8.0 + 0.5 * dtau * v
    for band in (outer, inner, gamma):
        band.setflags(write=False)
    return PropagatorCoefficients(outer, inner, gamma, inner, outer, dtau, h, WallPolicy(wall))


def assemble_rhs(coeffs: PropagatorCoefficients, psi) -> np.ndarray:
    """xi = (I - dtau/2 H) psi at the interior points."""
    s0, s1, s2, s3, s4 = _shifted(_values(psi), coeffs.wall)
    return (
        -coeffs.alpha * s0
        - coeffs.beta * s1
        + (2.0 - coeffs.gamma) * s2
        - coeffs.delta * s3
        - coeffs.zeta * s4
    )
