"""
Interior potentials of the confined oscillators.

The infinite wall term is never evaluated: it is carried by the grid's
pinned wall points. Every family here is finite for finite x.
"""

import math
from dataclasses import dataclass
from typing import TypeAlias

import numpy as np

from .exceptions import PotentialError
from .grid import BoxDomain, Grid

# Unconfined quartic levels, v = x^4/2 (n = 0..3)
FREE_QUARTIC_LEVELS = (0.530181045242, 1.8998365149009, 3.727848968993, 5.8223727556894)


@dataclass(frozen=True)
class Harmonic:
    """v(x) = sign * x^2 / 2; sign = -1 is the inverted (repulsive) oscillator"""

    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise PotentialError(f"harmonic sign must be +1 or -1, got {self.sign!r}")


@dataclass(frozen=True)
class Quartic:
    """v(x) = x^4 / 2"""


@dataclass(frozen=True)
class ShiftedHarmonic:
    """v(x) = (x - d)^2 / 2"""

    d: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.d):
            raise PotentialError(f"offset d must be finite, got {self.d}")


@dataclass(frozen=True)
class Zero:
    """v(x) = 0, the bare particle in a box"""


PotentialSpec: TypeAlias = Harmonic | Quartic | ShiftedHarmonic | Zero

POTENTIAL_NAMES = ("harmonic", "inverted", "quartic", "shifted-harmonic", "zero")


def eval_potential(spec: PotentialSpec, x):
    """Closed-form v(x); accepts a scalar or an array."""
    match spec:
        case Harmonic(sign=sign):
            return sign * 0.5 * x * x
        case Quartic():
            x2 = x * x
            return 0.5 * x2 * x2
        case ShiftedHarmonic(d=d):
            s = x - d
            return 0.5 * s * s
        case Zero():
            return 0.0 * x
    raise PotentialError(f"unsupported potential {spec!r}")


def sample_potential(spec: PotentialSpec, grid: Grid) -> np.ndarray:
    return np.asarray(eval_potential(spec, grid.x), dtype=float)


def potential_from_name(name: str, sign: int = 1, d: float = 0.0) -> PotentialSpec:
    """Resolve a CLI potential name to a spec."""
    match name:
        case "harmonic":
            return Harmonic(sign)
        case "inverted":
            return Harmonic(-1)
        case "quartic":
            return Quartic()
        case "shifted-harmonic":
            return ShiftedHarmonic(d)
        case "zero":
            return Zero()
    raise PotentialError(f"unknown potential {name!r}; choose from {', '.join(POTENTIAL_NAMES)}")


def potential_name(spec: PotentialSpec) -> str:
    match spec:
        case Harmonic(sign=1):
            return "harmonic"
        case Harmonic(sign=-1):
            return "inverted"
        case Quartic():
            return "quartic"
        case ShiftedHarmonic():
            return "shifted-harmonic"
        case Zero():
            return "zero"
    raise PotentialError(f"unsupported potential {spec!r}")


def potential_center(spec: PotentialSpec) -> float:
    """Point the potential is centred on; position moments are taken about it."""
    if isinstance(spec, ShiftedHarmonic):
        return spec.d
    return 0.0


def is_even(spec: PotentialSpec) -> bool:
    """True when v(-x) = v(x)."""
    if isinstance(spec, ShiftedHarmonic):
        return spec.d == 0.0
    return True


def box_level(domain: BoxDomain, n: int) -> float:
    """Particle-in-a-box level (n+1)^2 pi^2 / (2 width^2); (n+1)^2 pi^2 / (8 R^2) for [-R, R]."""
    return (n + 1) ** 2 * math.pi**2 / (2.0 * domain.width**2)


def free_level(spec: PotentialSpec, n: int) -> float:
    """Level of the unconfined oscillator, NaN where none is known."""
    match spec:
        case Harmonic(sign=1) | ShiftedHarmonic():
            return n + 0.5
        case Quartic() if n < len(FREE_QUARTIC_LEVELS):
            return FREE_QUARTIC_LEVELS[n]
    return math.nan
