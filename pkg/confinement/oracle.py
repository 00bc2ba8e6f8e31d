"""
Reference eigensolver for the discretized Hamiltonian.

Two independent paths:

* 3-point stencil: Sturm-sequence bisection on the tridiagonal matrix, with
  eigenvectors by inverse iteration on scipy's banded solver. It shares no
  code with the propagation engine.
* 5-point stencil: starting pairs from LAPACK (``scipy.linalg.eig_banded``)
  refined by shifted inverse iteration through ``pentasolve``. This is the
  same operator the engine propagates with, so the two agree to round-off.
"""

import logging
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.linalg import eig_banded, solve_banded

from .exceptions import OracleError, PivotError
from .grid import Grid
from .pentasolve import PentaBands, factor_penta
from .potential import PotentialSpec, sample_potential
from .quadrature import WaveFunction, normalize, rayleigh_quotient
from .stencil import WallPolicy

logger = logging.getLogger(__name__)

STENCIL_ORDERS = (3, 5)
BISECTION_STEPS = 200
INVERSE_STEPS = 3
# Relative distance of the inverse-iteration shift below the eigenvalue
SHIFT_OFFSET = 1e-7
SHIFT_RETRIES = 5
RESIDUAL_FLOOR = 1e-9


@njit(cache=True)
def _sturm_count(diag, off_sq, x, pivmin):
    """Number of eigenvalues of the symmetric tridiagonal matrix below x."""
    count = 0
    q = diag[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, diag.shape[0]):
        q = diag[i] - x - off_sq[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@njit(cache=True)
def _bisect(diag, off_sq, index, lo, hi, pivmin, max_steps):
    for _ in range(max_steps):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _sturm_count(diag, off_sq, mid, pivmin) <= index:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True, eq=False)
class DiscreteHamiltonian:
    """H = -D^2/2 + diag(v) on the interior points, walls eliminated.

    ``off_diagonals[k]`` holds the constant k+1-th off-diagonal, so the matrix
    is tridiagonal for the 3-point stencil and pentadiagonal for the 5-point one.
    """

    spec: PotentialSpec
    grid: Grid
    stencil_order: int
    wall: WallPolicy
    diagonal: np.ndarray
    off_diagonals: tuple[float, ...]

    @property
    def size(self) -> int:
        return len(self.diagonal)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diagonal * v
        for k, value in enumerate(self.off_diagonals, start=1):
            out[:-k] += value * v[k:]
            out[k:] += value * v[:-k]
        return out

    def to_dense(self) -> np.ndarray:
        dense = np.diag(self.diagonal)
        m = self.size
        for k, value in enumerate(self.off_diagonals, start=1):
            dense += np.diag(np.full(m - k, value), k) + np.diag(np.full(m - k, value), -k)
        return dense

    def lower_bands(self) -> np.ndarray:
        """``eig_banded`` lower form: row k holds the k-th subdiagonal."""
        bands = np.zeros((len(self.off_diagonals) + 1, self.size))
        bands[0] = self.diagonal
        for k, value in enumerate(self.off_diagonals, start=1):
            bands[k, :-k] = value
        return bands

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.diagonal)) + 2.0 * sum(abs(v) for v in self.off_diagonals))

    def gershgorin(self) -> tuple[float, float]:
        radius = 2.0 * sum(abs(v) for v in self.off_diagonals)
        return float(self.diagonal.min() - radius), float(self.diagonal.max() + radius)


def build_hamiltonian(
    spec: PotentialSpec,
    grid: Grid,
    stencil_order: int = 5,
    wall: WallPolicy = WallPolicy.IMAGE,
) -> DiscreteHamiltonian:
    if stencil_order not in STENCIL_ORDERS:
        raise ValueError(f"stencil order must be 3 or 5, got {stencil_order}")
    wall = WallPolicy(wall)
    inv_h2 = 1.0 / (grid.h * grid.h)
    v = sample_potential(spec, grid)[1:-1]

    if stencil_order == 3:
        # the 3-point stencil never reaches past a wall, so no ghost policy applies
        diagonal = inv_h2 + v
        off: tuple[float, ...] = (-0.5 * inv_h2,)
    else:
        diagonal = 1.25 * inv_h2 + v
        if wall is WallPolicy.IMAGE:
            diagonal[0] -= inv_h2 / 24.0
            diagonal[-1] -= inv_h2 / 24.0
        off = (-2.0 * inv_h2 / 3.0, inv_h2 / 24.0)
    diagonal.setflags(write=False)
    return DiscreteHamiltonian(spec, grid, stencil_order, wall, diagonal, off)


def _check_count(H: DiscreteHamiltonian, k: int) -> None:
    if not 1 <= k <= H.size:
        raise ValueError(f"k must lie in 1..{H.size}, got {k}")


def _tridiagonal_values(H: DiscreteHamiltonian, k: int) -> np.ndarray:
    off_sq = np.full(H.size - 1, H.off_diagonals[0] ** 2)
    pivmin = np.finfo(float).tiny * max(1.0, float(off_sq.max()))
    lo, hi = H.gershgorin()
    spread = hi - lo
    lo -= 1e-12 * spread + pivmin
    hi += 1e-12 * spread + pivmin
    diag = np.ascontiguousarray(H.diagonal)
    return np.array([_bisect(diag, off_sq, i, lo, hi, pivmin, BISECTION_STEPS) for i in range(k)])


def _orthogonalize(v: np.ndarray, previous: list[np.ndarray]) -> np.ndarray:
    for _ in range(2):
        for u in previous:
            v = v - np.dot(u, v) * u
    return v / np.linalg.norm(v)


def _tridiagonal_vector(H: DiscreteHamiltonian, value: float, previous: list[np.ndarray]) -> np.ndarray:
    m = H.size
    shift = value - SHIFT_OFFSET * max(1.0, abs(value))
    banded = np.zeros((3, m))
    banded[0, 1:] = H.off_diagonals[0]
    banded[1] = H.diagonal - shift
    banded[2, :-1] = H.off_diagonals[0]
    rng = np.random.default_rng(len(previous))
    v = _orthogonalize(rng.standard_normal(m), previous)
    for _ in range(INVERSE_STEPS):
        v = _orthogonalize(solve_banded((1, 1), banded, v), previous)
    return v


def _penta_pair(
    H: DiscreteHamiltonian, start_value: float, start_vector: np.ndarray, previous: list[np.ndarray]
) -> tuple[float, np.ndarray]:
    offset = SHIFT_OFFSET * max(1.0, abs(start_value))
    outer, inner = H.off_diagonals[1], H.off_diagonals[0]
    m = H.size
    for attempt in range(SHIFT_RETRIES + 1):
        bands = PentaBands(
            np.full(m, outer), np.full(m, inner), H.diagonal - (start_value - offset),
            np.full(m, inner), np.full(m, outer),
        )
        try:
            factorization = factor_penta(bands)
            break
        except PivotError:
            if attempt == SHIFT_RETRIES:
                raise
            offset *= 10.0
    v = _orthogonalize(start_vector, previous)
    for _ in range(INVERSE_STEPS):
        v = _orthogonalize(factorization.solve(v), previous)

    psi = WaveFunction.from_interior(v, H.grid)
    return rayleigh_quotient(psi, H.spec, H.wall), v


def _check_residual(H: DiscreteHamiltonian, value: float, v: np.ndarray, index: int) -> None:
    residual = float(np.linalg.norm(H.matvec(v) - value * v))
    bound = max(RESIDUAL_FLOOR, 1e3 * np.finfo(float).eps * H.norm_inf()) * float(np.linalg.norm(v))
    if not residual <= bound:
        raise OracleError(f"eigenpair {index} residual {residual:.3e} exceeds {bound:.3e}")


def _unit_pairs(H: DiscreteHamiltonian, k: int) -> tuple[np.ndarray, list[np.ndarray]]:
    _check_count(H, k)
    values = np.empty(k)
    vectors: list[np.ndarray] = []
    if H.stencil_order == 3:
        values[:] = _tridiagonal_values(H, k)
        for i in range(k):
            vectors.append(_tridiagonal_vector(H, values[i], vectors))
    else:
        start_values, start_vectors = eig_banded(
            H.lower_bands(), lower=True, select="i", select_range=(0, k - 1)
        )
        for i in range(k):
            values[i], v = _penta_pair(H, float(start_values[i]), start_vectors[:, i], vectors)
            vectors.append(v)
    for i, v in enumerate(vectors):
        _check_residual(H, values[i], v, i)
    logger.debug("oracle (%d-point, M=%d): %s", H.stencil_order, H.size, values)
    return values, vectors


def lowest_eigenvalues(H: DiscreteHamiltonian, k: int) -> list[float]:
    """The k smallest eigenvalues, ascending."""
    values, _ = _unit_pairs(H, k)
    return [float(value) for value in np.sort(values)]


def lowest_eigenpairs(H: DiscreteHamiltonian, k: int) -> tuple[np.ndarray, np.ndarray]:
    """The k smallest eigenvalues and their eigenvectors.

    Vectors are full-grid columns (walls included, zero there), normalized
    with the same Newton-Cotes rule as the engine and signed so the largest
    component is positive.
    """
    values, vectors = _unit_pairs(H, k)
    order = np.argsort(values, kind="stable")
    columns = np.empty((H.grid.n_points, k))
    for j, i in enumerate(order):
        psi = normalize(WaveFunction.from_interior(vectors[i], H.grid))
        column = np.array(psi.values)
        if column[np.argmax(np.abs(column))] < 0:
            column = -column
        columns[:, j] = column
    return values[order], columns
