"""
Pentadiagonal linear systems.

Bands are stored row-aligned: for row i, ``alpha[i]`` multiplies x[i-2],
``beta[i]`` x[i-1], ``gamma[i]`` x[i], ``delta[i]`` x[i+1] and ``zeta[i]``
x[i+2]. Entries that would reach outside the matrix are ignored.

The factorization is banded LU without pivoting. It is computed once per
band set and reused for every right-hand side.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit

from .exceptions import PivotError

# Pivots at or below PIVOT_GUARD * max|gamma| count as zero
PIVOT_GUARD = 1e-14
MIN_ROWS = 5


@njit(cache=True)
def _factor(alpha, beta, gamma, delta, zeta, guard):
    """
    Banded Doolittle LU of a pentadiagonal matrix.

    Returns the two unit-lower multipliers, the three upper bands and the
    singular row index plus one (0 when every pivot cleared the guard).
    """
    num_rows = gamma.shape[0]
    l1 = np.zeros(num_rows)
    l2 = np.zeros(num_rows)
    u0 = np.zeros(num_rows)
    u1 = np.zeros(num_rows)
    u2 = np.zeros(num_rows)
    for i in range(num_rows):
        pivot = gamma[i]
        if i >= 2:
            l2[i] = alpha[i] / u0[i - 2]
            pivot -= l2[i] * u2[i - 2]
        if i >= 1:
            sub = beta[i]
            if i >= 2:
                sub -= l2[i] * u1[i - 2]
            l1[i] = sub / u0[i - 1]
            pivot -= l1[i] * u1[i - 1]
        if abs(pivot) <= guard:
            u0[i] = pivot
            return l1, l2, u0, u1, u2, i + 1
        u0[i] = pivot
        if i + 1 < num_rows:
            upper = delta[i]
            if i >= 1:
                upper -= l1[i] * u2[i - 1]
            u1[i] = upper
        if i + 2 < num_rows:
            u2[i] = zeta[i]
    return l1, l2, u0, u1, u2, 0


@njit(cache=True)
def _substitute(l1, l2, u0, u1, u2, rhs):
    num_rows = rhs.shape[0]
    y = np.empty(num_rows)
    for i in range(num_rows):
        acc = rhs[i]
        if i >= 1:
            acc -= l1[i] * y[i - 1]
        if i >= 2:
            acc -= l2[i] * y[i - 2]
        y[i] = acc

    out = np.empty(num_rows)
    for i in range(num_rows - 1, -1, -1):
        acc = y[i]
        if i + 1 < num_rows:
            acc -= u1[i] * out[i + 1]
        if i + 2 < num_rows:
            acc -= u2[i] * out[i + 2]
        out[i] = acc / u0[i]
    return out


@dataclass(frozen=True)
class PentaBands:
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    delta: np.ndarray
    zeta: np.ndarray

    def __post_init__(self):
        size = len(self.gamma)
        for name in ("alpha", "beta", "gamma", "delta", "zeta"):
            band = np.ascontiguousarray(getattr(self, name), dtype=float)
            if band.shape != (size,):
                raise ValueError(f"band {name} has shape {band.shape}, expected ({size},)")
            if not np.all(np.isfinite(band)):
                raise ValueError(f"band {name} has non-finite entries")
            object.__setattr__(self, name, band)

    @property
    def size(self) -> int:
        return len(self.gamma)

    def multiply(self, x: np.ndarray) -> np.ndarray:
        """A @ x without forming A."""
        x = np.asarray(x, dtype=float)
        out = self.gamma * x
        out[1:] += self.beta[1:] * x[:-1]
        out[2:] += self.alpha[2:] * x[:-2]
        out[:-1] += self.delta[:-1] * x[1:]
        out[:-2] += self.zeta[:-2] * x[2:]
        return out

    def to_dense(self) -> np.ndarray:
        dense = np.diag(self.gamma)
        dense += np.diag(self.beta[1:], -1) + np.diag(self.alpha[2:], -2)
        dense += np.diag(self.delta[:-1], 1) + np.diag(self.zeta[:-2], 2)
        return dense


@dataclass(frozen=True)
class PentaSystem:
    bands: PentaBands
    rhs: np.ndarray


@dataclass(frozen=True)
class PentaFactorization:
    """Immutable LU factors; safe to share between solves."""

    l1: np.ndarray
    l2: np.ndarray
    u0: np.ndarray
    u1: np.ndarray
    u2: np.ndarray

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        rhs = np.ascontiguousarray(rhs, dtype=float)
        if rhs.shape != self.u0.shape:
            raise ValueError(f"rhs has shape {rhs.shape}, expected {self.u0.shape}")
        return _substitute(self.l1, self.l2, self.u0, self.u1, self.u2, rhs)


def factor_penta(bands: PentaBands) -> PentaFactorization:
    if bands.size < MIN_ROWS:
        raise ValueError(f"pentadiagonal system needs at least {MIN_ROWS} rows, got {bands.size}")
    guard = PIVOT_GUARD * float(np.max(np.abs(bands.gamma)))
    l1, l2, u0, u1, u2, bad_row = _factor(
        bands.alpha, bands.beta, bands.gamma, bands.delta, bands.zeta, guard
    )
    if bad_row:
        raise PivotError(row=bad_row - 1, pivot=float(u0[bad_row - 1]), guard=guard)
    for factor in (l1, l2, u0, u1, u2):
        factor.setflags(write=False)
    return PentaFactorization(l1, l2, u0, u1, u2)


def solve_penta(system: PentaSystem) -> np.ndarray:
    """Factor and solve in one call; engines should keep the factorization instead."""
    return factor_penta(system.bands).solve(system.rhs)
