"""
Grid-convergence studies with Richardson analysis.
"""

import logging
import math

import numpy as np
import pandas as pd
from scipy.optimize import brentq

from .runs import RunConfig, RunOutcome, run_many

logger = logging.getLogger(__name__)

ORDER_BRACKET = (0.05, 16.0)


def observed_order(h: tuple[float, float, float], e: tuple[float, float, float]) -> float:
    """Order p with (E1 - E2)/(E2 - E3) = (h1^p - h2^p)/(h2^p - h3^p); NaN if none."""
    h1, h2, h3 = h
    e1, e2, e3 = e
    if e2 == e3 or e1 == e2:
        return math.nan
    target = (e1 - e2) / (e2 - e3)

    def mismatch(p):
        return (h1**p - h2**p) / (h2**p - h3**p) - target

    lo, hi = ORDER_BRACKET
    try:
        if mismatch(lo) * mismatch(hi) > 0:
            return math.nan
        return float(brentq(mismatch, lo, hi, xtol=1e-12))
    except (ValueError, ZeroDivisionError, OverflowError):
        return math.nan


def extrapolate(h2: float, h3: float, e2: float, e3: float, p: float) -> float:
    if not math.isfinite(p):
        return math.nan
    return e3 + (e3 - e2) / ((h2 / h3) ** p - 1.0)


def validate_grid_sizes(grid_sizes) -> list[int]:
    sizes = [int(n) for n in grid_sizes]
    if not sizes:
        raise ValueError("at least one grid size is needed")
    for first, second in zip(sizes, sizes[1:]):
        if second <= first:
            raise ValueError(f"grid sizes must be strictly ascending, got {first} then {second}")
    return sizes


def convergence_table(
    config: RunConfig, grid_sizes, state: int = 0, jobs: int = 1
) -> tuple[pd.DataFrame, list[RunOutcome]]:
    """Energy of one state on each grid, with differences and Richardson columns.

    ``difference`` is E(N_i) - E(N_{i-1}); ``order`` and ``extrapolated`` are
    filled from the third row on, each from the triple ending at that row.
    """
    sizes = validate_grid_sizes(grid_sizes)
    configs = [config.with_changes(N=n, n_states=max(config.n_states, state + 1)) for n in sizes]
    outcomes = run_many(configs, jobs)

    rows = []
    for n, outcome in zip(sizes, outcomes):
        match = [r for r in outcome.records if r.state_index == state and r.method != "oracle"]
        if not match:
            match = [r for r in outcome.records if r.state_index == state]
        if match:
            record = match[0]
            rows.append({"N": n, "h": record.h, "energy": record.energy, "converged": record.converged})
        else:
            rows.append({"N": n, "h": np.nan, "energy": np.nan, "converged": False})

    frame = pd.DataFrame(rows, columns=["N", "h", "energy", "converged"])
    frame["difference"] = frame["energy"].diff()
    orders = [math.nan] * len(frame)
    extrapolated = [math.nan] * len(frame)
    for i in range(2, len(frame)):
        h = tuple(frame["h"].iloc[i - 2:i + 1])
        e = tuple(frame["energy"].iloc[i - 2:i + 1])
        orders[i] = observed_order(h, e)
        extrapolated[i] = extrapolate(h[1], h[2], e[1], e[2], orders[i])
        logger.info("N=%d: observed order %.4f", frame["N"].iloc[i], orders[i])
    frame["order"] = orders
    frame["extrapolated"] = extrapolated
    return frame, outcomes
