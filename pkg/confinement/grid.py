"""
Uniform meshes over the confinement box.

Grid points include both walls, where every wavefunction is pinned to zero;
the unknowns of the propagation live on the interior points ``1 .. N-2``.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .exceptions import GridError

# Five-point stencil plus at least a few interior unknowns
MIN_POINTS = 9


@dataclass(frozen=True)
class BoxDomain:
    """Interval [a, b] between two impenetrable walls.

    ``width`` defaults to ``b - a``; shifted boxes pass their nominal width
    so that the spacing does not pick up the rounding of the shift.
    """

    a: float
    b: float
    width: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise GridError(f"walls must be finite, got [{self.a}, {self.b}]")
        if not self.a < self.b:
            raise GridError(f"left wall must lie left of right wall, got [{self.a}, {self.b}]")
        if self.width is None:
            object.__setattr__(self, "width", self.b - self.a)

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    @property
    def is_symmetric(self) -> bool:
        return self.a == -self.b


@dataclass(frozen=True)
class Grid:
    """Uniform mesh of ``n_points`` points, walls included.

    Positions come from index arithmetic ``a + j*h``; they are never
    accumulated by repeated addition.
    """

    domain: BoxDomain
    n_points: int
    h: float = field(init=False)

    def __post_init__(self):
        if isinstance(self.n_points, bool) or int(self.n_points) != self.n_points:
            raise GridError(f"N must be an integer, got {self.n_points!r}")
        if self.n_points < MIN_POINTS:
            raise GridError(f"N must be at least {MIN_POINTS}, got {self.n_points}")
        object.__setattr__(self, "n_points", int(self.n_points))
        object.__setattr__(self, "h", self.domain.width / (self.n_points - 1))

    @cached_property
    def x(self) -> np.ndarray:
        n = self.n_points
        x = self.domain.a + np.arange(n, dtype=float) * self.h
        if self.is_symmetric:
            # mirror the left half so parity holds bit for bit
            half = n // 2
            x[n - half:] = -x[:half][::-1]
            if n % 2:
                x[half] = 0.0
        x.setflags(write=False)
        return x

    @property
    def interior(self) -> np.ndarray:
        return self.x[1:-1]

    @property
    def n_interior(self) -> int:
        return self.n_points - 2

    @property
    def is_symmetric(self) -> bool:
        return self.domain.is_symmetric


def make_symmetric_grid(R: float, N: int) -> Grid:
    """Box [-R, R] with N points."""
    if not (math.isfinite(R) and R > 0):
        raise GridError(f"half-width R must be positive, got {R}")
    return Grid(BoxDomain(-float(R), float(R)), N)


def make_asymmetric_grid(L: float, d: float, N: int) -> Grid:
    """Box of width L whose center sits at d: [-L/2 + d, L/2 + d]."""
    if not (math.isfinite(L) and L > 0):
        raise GridError(f"box width L must be positive, got {L}")
    if not math.isfinite(d):
        raise GridError(f"offset d must be finite, got {d}")
    return Grid(BoxDomain(-L / 2 + d, L / 2 + d, float(L)), N)
