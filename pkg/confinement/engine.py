"""
Imaginary-time propagation with Gram-Schmidt deflation.

Every iteration runs propagate -> deflate -> normalize -> energy -> test.
The step matrix depends only on (potential, grid, dtau), so it is factored
once per state and reused. Excited states are obtained one after another,
each one deflated against every state below it.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np

from .exceptions import CollapseError, NumericalError, PivotError, StateSolveError
from .grid import Grid
from .pentasolve import PentaFactorization, factor_penta
from .potential import PotentialSpec, potential_center, sample_potential
from .quadrature import (
    WaveFunction,
    energy_expectation,
    integrate,
    norm,
    normalize,
    position_moments,
    rayleigh_quotient,
)
from .stencil import PropagatorCoefficients, WallPolicy, assemble_coefficients, assemble_rhs

logger = logging.getLogger(__name__)

# Deflation that leaves less than this fraction of the state is a collapse
COLLAPSE_FRACTION = 1e-12
COLLAPSE_NORM = 1e-150
# Trial functions are tapered to zero over this many grid steps at each wall
TAPER_STEPS = 4
PROGRESS_EVERY = 10_000


class TrialKind(StrEnum):
    EVEN = "even-gaussian"
    ODD = "odd-gaussian"
    CENTER = "gaussian-at-center"
    # even for even state index, odd otherwise
    ALTERNATING = "parity-alternating"


@dataclass(frozen=True)
class ItpConfig:
    dtau: float = 1e-3
    tol: float = 1e-13
    max_iter: int = 1_000_000
    sustain: int = 3
    trial: TrialKind = TrialKind.ALTERNATING
    wall: WallPolicy = WallPolicy.IMAGE
    # optional bound on max|psi_new - psi_old| over the same sustain window
    psi_tol: float | None = None
    trial_center: float | None = None
    trial_width: float = 1.0
    clamp_dtau: bool = True
    restarts: int = 5

    def __post_init__(self):
        if not (math.isfinite(self.dtau) and self.dtau > 0):
            raise ValueError(f"dtau must be positive, got {self.dtau}")
        if not (math.isfinite(self.tol) and self.tol > 0):
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter}")
        if self.sustain < 1:
            raise ValueError(f"sustain must be at least 1, got {self.sustain}")
        if self.psi_tol is not None and not self.psi_tol > 0:
            raise ValueError(f"psi_tol must be positive, got {self.psi_tol}")
        if not self.trial_width > 0:
            raise ValueError(f"trial width must be positive, got {self.trial_width}")
        if self.restarts < 0:
            raise ValueError(f"restarts must be non-negative, got {self.restarts}")
        object.__setattr__(self, "trial", TrialKind(self.trial))
        object.__setattr__(self, "wall", WallPolicy(self.wall))


@dataclass(frozen=True, eq=False)
class SolveResult:
    state_index: int
    energy: float
    psi: WaveFunction
    iterations: int
    energy_history: np.ndarray = field(repr=False)
    moments: tuple[float, float]
    converged: bool
    dtau: float
    # Newton-Cotes <psi|H|psi>, reported next to the Rayleigh quotient
    energy_quadrature: float = math.nan


def trial_function(
    selector: TrialKind | str,
    grid: Grid,
    *,
    state_index: int = 0,
    center: float | None = None,
    width: float = 1.0,
) -> WaveFunction:
    """Normalized Gaussian (even) or x-Gaussian (odd) starting guess.

    Samples are the plain Gaussian except within ``TAPER_STEPS`` points of a
    wall, where a sin^2 ramp brings them to zero. The ramp is counted in grid
    indices, so it keeps the parity of the Gaussian about the box midpoint.
    """
    selector = TrialKind(selector)
    if selector is TrialKind.ALTERNATING:
        selector = TrialKind.EVEN if state_index % 2 == 0 else TrialKind.ODD

    domain = grid.domain
    x = grid.x
    c = domain.midpoint if center is None else center
    s = (x - c) / width
    values = np.exp(-s * s)
    if selector is TrialKind.ODD:
        values = s * values

    index = np.arange(grid.n_points)
    steps = np.minimum(index, grid.n_points - 1 - index)
    ramp = np.sin(0.5 * np.pi * np.minimum(steps / TAPER_STEPS, 1.0)) ** 2
    values = values * ramp
    values[0] = values[-1] = 0.0
    return normalize(WaveFunction(values, grid))


def propagate_step(
    psi: WaveFunction, factorization: PentaFactorization, coeffs: PropagatorCoefficients
) -> WaveFunction:
    """One implicit step; the result is not normalized."""
    interior = factorization.solve(assemble_rhs(coeffs, psi))
    return WaveFunction.from_interior(interior, psi.grid)


def deflate(psi: WaveFunction, lower_states: Sequence[WaveFunction]) -> WaveFunction:
    """Remove the components along each (orthonormal) lower state.

    Two modified Gram-Schmidt sweeps, so the residual overlaps sit at
    round-off even when the lower states are only orthonormal to ~1e-10.
    """
    if not lower_states:
        return psi
    grid = psi.grid
    values = np.array(psi.values)
    for _ in range(2):
        for phi in lower_states:
            values -= integrate(values * phi.values, grid) * phi.values
    result = WaveFunction(values, grid)

    before = norm(psi)
    after = norm(result)
    if after <= COLLAPSE_NORM or after <= COLLAPSE_FRACTION * before:
        raise CollapseError(
            "state lies in the span of the lower states; perturb the trial function"
        )
    return result


def stable_dtau(
    spec: PotentialSpec, grid: Grid, psi: WaveFunction, dtau: float, wall: WallPolicy
) -> float:
    """Largest step (not above ``dtau``) that keeps the target state dominant.

    The step amplification (1 - dtau e/2) / (1 + dtau e/2) tends to -1 for
    the stiffest grid modes; the target outgrows them only while
    dtau^2 * e_target * e_max < 4.
    """
    v = sample_potential(spec, grid)[1:-1]
    e_max = 8.0 / (3.0 * grid.h * grid.h) + max(float(v.max()), 0.0)
    e_target = rayleigh_quotient(psi, spec, wall)

    ceiling = math.inf
    if e_target > 0:
        ceiling = 1.0 / math.sqrt(e_target * e_max)
    v_min = float(v.min())
    if v_min < 0:
        # keeps I + dtau/2 H positive definite
        ceiling = min(ceiling, 1.0 / abs(v_min))

    if dtau > ceiling:
        logger.info("dtau %.3e exceeds the stability ceiling; using %.3e", dtau, ceiling)
        return ceiling
    return dtau


def _factored_step(spec: PotentialSpec, grid: Grid, dtau: float, config: ItpConfig):
    for attempt in range(config.restarts + 1):
        coeffs = assemble_coefficients(spec, grid, dtau, config.wall)
        try:
            return coeffs, factor_penta(coeffs.bands())
        except PivotError as exc:
            if attempt == config.restarts:
                raise
            logger.warning("%s; retrying with dtau = %.3e", exc, dtau / 2)
            dtau /= 2
    raise AssertionError("unreachable")


def solve_state(
    spec: PotentialSpec,
    grid: Grid,
    config: ItpConfig = ItpConfig(),
    lower_states: Sequence[WaveFunction] = (),
    *,
    state_index: int | None = None,
) -> SolveResult:
    n = len(lower_states) if state_index is None else state_index
    wall = config.wall

    psi = trial_function(
        config.trial, grid, state_index=n, center=config.trial_center, width=config.trial_width
    )
    psi = normalize(deflate(psi, lower_states))

    dtau = config.dtau
    if config.clamp_dtau:
        dtau = stable_dtau(spec, grid, psi, dtau, wall)
    coeffs, factorization = _factored_step(spec, grid, dtau, config)

    energy = rayleigh_quotient(psi, spec, wall)
    history = [energy]
    streak = 0
    converged = False
    iterations = 0
    while iterations < config.max_iter:
        iterations += 1
        previous = psi
        psi = propagate_step(psi, factorization, coeffs)
        psi = normalize(deflate(psi, lower_states))
        new_energy = rayleigh_quotient(psi, spec, wall)
        history.append(new_energy)

        settled = abs(new_energy - energy) <= config.tol
        if settled and config.psi_tol is not None:
            settled = float(np.max(np.abs(psi.values - previous.values))) <= config.psi_tol
        energy = new_energy
        streak = streak + 1 if settled else 0
        if streak >= config.sustain:
            converged = True
            break
        if iterations % PROGRESS_EVERY == 0:
            logger.debug("state %d: iteration %d, energy %.15g", n, iterations, energy)

    if converged:
        logger.info("state %d converged: E = %.15g after %d iterations", n, energy, iterations)
    else:
        logger.warning("state %d not converged after %d iterations (E = %.15g)", n, iterations, energy)

    return SolveResult(
        state_index=n,
        energy=energy,
        psi=psi,
        iterations=iterations,
        energy_history=np.asarray(history),
        moments=position_moments(psi, potential_center(spec)),
        converged=converged,
        dtau=coeffs.dtau,
        energy_quadrature=energy_expectation(psi, spec, wall),
    )


def solve_spectrum(
    spec: PotentialSpec, grid: Grid, config: ItpConfig = ItpConfig(), n_states: int = 1
) -> list[SolveResult]:
    """States 0 .. n_states-1 in increasing order."""
    if n_states < 1:
        raise ValueError(f"n_states must be at least 1, got {n_states}")
    results: list[SolveResult] = []
    for n in range(n_states):
        try:
            result = solve_state(spec, grid, config, [r.psi for r in results], state_index=n)
        except NumericalError as exc:
            raise StateSolveError(n, exc, completed=results) from exc
        results.append(result)

    for lower, upper in zip(results, results[1:]):
        if upper.energy < lower.energy - 2 * config.tol:
            logger.warning(
                "state %d (E = %.15g) lies below state %d (E = %.15g)",
                upper.state_index, upper.energy, lower.state_index, lower.energy,
            )
    return results
