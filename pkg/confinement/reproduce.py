"""
Reference manifests and the pass/fail comparison behind ``reproduce``.

A manifest is a CSV file (``#`` lines are provenance comments) with one row
per reference cell. Rows sharing a run configuration are solved together,
for as many states as the highest state they ask for.
"""

import logging
import math
from pathlib import Path

import numpy as np
import pandas as pd

from .exceptions import ManifestError
from .runs import RunConfig, run_many

logger = logging.getLogger(__name__)

TABLES = ("I", "II", "III", "IV", "V", "VI")

MANIFEST_COLUMNS = [
    "case", "potential", "sign", "R", "L", "d", "N", "state", "quantity",
    "reference", "tolerance", "scale", "itp_tol", "psi_tol",
]
CONFIG_COLUMNS = ["potential", "sign", "R", "L", "d", "N", "itp_tol", "psi_tol"]
QUANTITIES = {"energy": "energy", "x2": "x2_moment", "x4": "x4_moment"}


def manifest_path(table_id: str, reference_dir: Path) -> Path:
    if table_id not in TABLES:
        raise ManifestError(f"unknown table {table_id!r}; choose from {', '.join(TABLES)}")
    return Path(reference_dir) / f"table_{table_id}.csv"


def load_manifest(table_id: str, reference_dir: Path) -> pd.DataFrame:
    path = manifest_path(table_id, reference_dir)
    if not path.is_file():
        raise ManifestError(f"manifest {path} not found")
    frame = pd.read_csv(path, comment="#", skipinitialspace=True)
    missing = [c for c in MANIFEST_COLUMNS if c not in frame.columns]
    if missing:
        raise ManifestError(f"{path.name}: missing columns {missing}")
    unknown = set(frame["quantity"]) - set(QUANTITIES)
    if unknown:
        raise ManifestError(f"{path.name}: unknown quantities {sorted(unknown)}")
    frame["case"] = frame["case"].astype(str)
    return frame


def _optional(value) -> float | None:
    return None if pd.isna(value) else float(value)


def _run_config(key: tuple, n_states: int, base: RunConfig) -> RunConfig:
    potential, sign, R, L, d, N, itp_tol, psi_tol = key
    return base.with_changes(
        potential=str(potential),
        sign=int(sign),
        R=_optional(R),
        L=_optional(L),
        d=_optional(d) or 0.0,
        N=int(N),
        tol=_optional(itp_tol) or base.tol,
        psi_tol=_optional(psi_tol),
        n_states=n_states,
        method="itp",
    )


def run_manifest(
    manifest: pd.DataFrame, base: RunConfig | None = None, cases=None, jobs: int = 1
) -> pd.DataFrame:
    """Compute every cell; adds ``computed``, ``deviation`` and ``passed`` columns."""
    base = base or RunConfig()
    if cases:
        wanted = {str(c) for c in cases}
        unknown = wanted - set(manifest["case"])
        if unknown:
            raise ManifestError(f"unknown cases {sorted(unknown)}")
        manifest = manifest[manifest["case"].isin(wanted)]
    manifest = manifest.reset_index(drop=True)

    groups = list(manifest.groupby(CONFIG_COLUMNS, dropna=False, sort=False))
    configs = [_run_config(key, int(rows["state"].max()) + 1, base) for key, rows in groups]
    outcomes = run_many(configs, jobs)

    computed = np.full(len(manifest), np.nan)
    for (_, rows), outcome in zip(groups, outcomes):
        if outcome.error:
            logger.warning("%s", outcome.error)
        by_state = {r.state_index: r for r in outcome.records}
        for index, row in rows.iterrows():
            record = by_state.get(int(row["state"]))
            if record is not None and record.converged:
                computed[index] = row["scale"] * getattr(record, QUANTITIES[row["quantity"]])

    report = manifest.copy()
    report["computed"] = computed
    report["deviation"] = (report["computed"] - report["reference"]).abs()
    report["passed"] = report["deviation"] <= report["tolerance"]
    return report


def format_report(report: pd.DataFrame, table_id: str) -> str:
    lines = [f"Table {table_id}: {int(report['passed'].sum())}/{len(report)} cells within tolerance"]
    for row in report.itertuples():
        verdict = "PASS" if row.passed else "FAIL"
        lines.append(
            f"{verdict}  {row.case:<14} n={row.state} {row.quantity:<6} "
            f"ref={row.reference:.13g} got={row.computed:.13g} "
            f"dev={row.deviation:.2e} tol={row.tolerance:.1e}"
        )
    worst = report["deviation"].max()
    lines.append(f"max deviation: {worst:.3e}" if math.isfinite(worst) else "max deviation: nan")
    return "\n".join(lines) + "\n"
