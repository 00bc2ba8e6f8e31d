"""
Run configuration and execution shared by the management commands.

A run is one (potential, box, grid) problem solved for ``n_states`` states by
the propagation engine, the oracle, or both. ``run_point`` never raises for
problems inside a run, so sweeps and manifests can fan points out over a
process pool and keep going after a failed point.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .engine import ItpConfig, SolveResult, solve_spectrum
from .exceptions import ConfinementError, NumericalError, StateSolveError
from .grid import Grid, make_asymmetric_grid, make_symmetric_grid
from .oracle import build_hamiltonian, lowest_eigenpairs
from .potential import Harmonic, PotentialSpec, potential_center, potential_from_name
from .quadrature import WaveFunction, position_moments, quadrature_order
from .records import ResultRecord

logger = logging.getLogger(__name__)

METHODS = ("itp", "oracle", "both")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_CONVERGED = 3
EXIT_NUMERICAL = 4


@dataclass(frozen=True)
class RunConfig:
    """Validated options of one run; built by ``RunConfigForm``."""

    potential: str = "harmonic"
    sign: int = 1
    R: float | None = 1.0
    L: float | None = None
    d: float = 0.0
    N: int = 2001
    dtau: float = 1e-3
    tol: float = 1e-13
    psi_tol: float | None = None
    max_iter: int = 1_000_000
    sustain: int = 3
    n_states: int = 1
    trial: str = "parity-alternating"
    wall: str = "image"
    method: str = "itp"
    format: str = "csv"
    out: str | None = None
    dump_psi: str | None = None
    jobs: int = 1

    def engine_config(self) -> ItpConfig:
        return ItpConfig(
            dtau=self.dtau,
            tol=self.tol,
            max_iter=self.max_iter,
            sustain=self.sustain,
            trial=self.trial,
            wall=self.wall,
            psi_tol=self.psi_tol,
        )

    def with_changes(self, **changes) -> "RunConfig":
        # switching geometry form drops the other member
        if changes.get("L") is not None:
            changes.setdefault("R", None)
        if changes.get("R") is not None:
            changes.setdefault("L", None)
        return replace(self, **changes)


@dataclass
class RunOutcome:
    config: RunConfig
    records: list[ResultRecord] = field(default_factory=list)
    # (state_index, psi, energy) of the primary method, for wavefunction dumps
    states: list[tuple[int, WaveFunction, float]] = field(default_factory=list)
    status: int = EXIT_OK
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.status == EXIT_OK


def build_problem(config: RunConfig) -> tuple[PotentialSpec, Grid]:
    """Potential and grid of a run.

    With ``L`` the walls sit at ``-L/2 + d`` and ``L/2 + d`` around an
    oscillator centred at the origin. With ``R`` the box is ``[-R, R]`` and
    ``shifted-harmonic`` moves the oscillator minimum to ``d`` instead.
    """
    if config.L is not None:
        grid = make_asymmetric_grid(config.L, config.d, config.N)
        if config.potential == "shifted-harmonic":
            return Harmonic(1), grid
        return potential_from_name(config.potential, config.sign), grid
    grid = make_symmetric_grid(config.R, config.N)
    return potential_from_name(config.potential, config.sign, config.d), grid


def _record(config: RunConfig, grid: Grid, **values) -> ResultRecord:
    domain = grid.domain
    return ResultRecord(
        potential=config.potential,
        R=0.5 * domain.width,
        a=domain.a,
        b=domain.b,
        d=config.d,
        N=grid.n_points,
        h=grid.h,
        quadrature_order=quadrature_order(grid),
        **values,
    )


def itp_records(config: RunConfig, grid: Grid, results: list[SolveResult]) -> list[ResultRecord]:
    return [
        _record(
            config,
            grid,
            state_index=r.state_index,
            dtau=r.dtau,
            iterations=r.iterations,
            energy=r.energy,
            x2_moment=r.moments[0],
            x4_moment=r.moments[1],
            converged=r.converged,
            method="itp",
        )
        for r in results
    ]


def _oracle_states(config: RunConfig, spec: PotentialSpec, grid: Grid):
    H = build_hamiltonian(spec, grid, 5, config.wall)
    values, columns = lowest_eigenpairs(H, config.n_states)
    states = []
    for n, value in enumerate(values):
        psi = WaveFunction(columns[:, n], grid, normalized=True)
        states.append((n, psi, float(value)))
    return states


def oracle_records(config: RunConfig, spec: PotentialSpec, grid: Grid, states) -> list[ResultRecord]:
    records = []
    origin = potential_center(spec)
    for n, psi, energy in states:
        x2, x4 = position_moments(psi, origin)
        records.append(
            _record(
                config,
                grid,
                state_index=n,
                dtau=math.nan,
                iterations=0,
                energy=energy,
                x2_moment=x2,
                x4_moment=x4,
                converged=True,
                method="oracle",
            )
        )
    return records


def execute(config: RunConfig) -> RunOutcome:
    """Solve one run; numerical failures end up in the outcome, not raised."""
    spec, grid = build_problem(config)
    outcome = RunOutcome(config)

    if config.method in ("itp", "both"):
        try:
            results = solve_spectrum(spec, grid, config.engine_config(), config.n_states)
        except StateSolveError as exc:
            results = exc.completed
            outcome.status, outcome.error = EXIT_NUMERICAL, str(exc)
        outcome.records += itp_records(config, grid, results)
        outcome.states = [(r.state_index, r.psi, r.energy) for r in results]
        if outcome.ok and not all(r.converged for r in results):
            missing = [r.state_index for r in results if not r.converged]
            outcome.status = EXIT_NOT_CONVERGED
            outcome.error = f"states {missing} did not converge in {config.max_iter} iterations"

    if config.method in ("oracle", "both"):
        try:
            states = _oracle_states(config, spec, grid)
        except NumericalError as exc:
            outcome.status, outcome.error = EXIT_NUMERICAL, f"oracle: {exc}"
        else:
            outcome.records += oracle_records(config, spec, grid, states)
            if config.method == "oracle":
                outcome.states = states
    return outcome


def run_point(config: RunConfig) -> RunOutcome:
    """``execute`` that turns any package error into a failed outcome."""
    try:
        return execute(config)
    except ConfinementError as exc:
        status = EXIT_USAGE if isinstance(exc, ValueError) else EXIT_NUMERICAL
        logger.warning("run %s failed: %s", _describe(config), exc)
        return RunOutcome(config, status=status, error=str(exc))


def run_many(configs: list[RunConfig], jobs: int = 1) -> list[RunOutcome]:
    """Outcomes in input order, whatever order the workers finish in."""
    if jobs <= 1 or len(configs) <= 1:
        return [run_point(c) for c in configs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_point, configs))


def _describe(config: RunConfig) -> str:
    geometry = f"L={config.L}, d={config.d}" if config.L is not None else f"R={config.R}"
    return f"{config.potential} ({geometry}, N={config.N})"
