"""
Result records and their CSV / JSON / wavefunction-dump emitters.
"""

import io
import json
import math
import re
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np
import pandas as pd

from .grid import Grid
from .quadrature import WaveFunction

FLOAT_FORMAT = "%.17g"
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class ResultRecord:
    """One row per (run, state)."""

    state_index: int
    potential: str
    R: float
    a: float
    b: float
    d: float
    N: int
    h: float
    dtau: float
    iterations: int
    energy: float
    x2_moment: float
    x4_moment: float
    converged: bool
    method: str
    quadrature_order: str

    def __post_init__(self):
        if self.converged and not math.isfinite(self.energy):
            raise ValueError(f"state {self.state_index}: converged record with energy {self.energy}")

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]


def records_frame(records) -> pd.DataFrame:
    return pd.DataFrame([asdict(r) for r in records], columns=ResultRecord.columns())


def format_csv(frame: pd.DataFrame) -> str:
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, na_rep="nan", lineterminator="\n")
    return buffer.getvalue()


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, np.generic):
        return _json_value(value.item())
    return value


def format_json(frame: pd.DataFrame) -> str:
    rows = [{key: _json_value(value) for key, value in row.items()} for row in frame.to_dict("records")]
    return json.dumps(rows, indent=2) + "\n"


def render(frame: pd.DataFrame, fmt: str) -> str:
    if fmt == "csv":
        return format_csv(frame)
    if fmt == "json":
        return format_json(frame)
    raise ValueError(f"unknown output format {fmt!r}; choose from {', '.join(FORMATS)}")


def render_records(records, fmt: str) -> str:
    return render(records_frame(records), fmt)


def read_records(source) -> list[ResultRecord]:
    """Parse a CSV emitted by ``render_records`` back into records."""
    if isinstance(source, str) and "\n" in source:
        source = io.StringIO(source)
    frame = pd.read_csv(source, float_precision="round_trip", keep_default_na=False, na_values=["nan"])
    out = []
    for row in frame.to_dict("records"):
        row["state_index"] = int(row["state_index"])
        row["N"] = int(row["N"])
        row["iterations"] = int(row["iterations"])
        row["converged"] = bool(row["converged"])
        row["potential"] = str(row["potential"])
        row["method"] = str(row["method"])
        row["quadrature_order"] = str(row["quadrature_order"])
        for name in ("R", "a", "b", "d", "h", "dtau", "energy", "x2_moment", "x4_moment"):
            row[name] = float(row[name])
        out.append(ResultRecord(**row))
    return out


def dump_path(template: str | Path, state_index: int, multiple: bool) -> Path:
    """Per-state file name: ``{n}`` in the template, else ``_n<k>`` before the suffix."""
    template = str(template)
    if "{n}" in template:
        return Path(template.replace("{n}", str(state_index)))
    path = Path(template)
    if not multiple:
        return path
    return path.with_name(f"{path.stem}_n{state_index}{path.suffix}")


def dump_wavefunction(path: str | Path, psi: WaveFunction, *, potential: str, energy: float) -> Path:
    """Two whitespace-separated columns ``x psi`` under ``#`` metadata lines."""
    grid: Grid = psi.grid
    header = "\n".join(
        [
            f"potential: {potential}",
            f"N: {grid.n_points}",
            f"h: {grid.h:.17g}",
            f"energy: {energy:.17g}",
            "x psi",
        ]
    )
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, np.column_stack([grid.x, psi.values]), fmt=FLOAT_FORMAT, header=header, comments="# ")
    return path


_META = re.compile(r"^#\s*(\w+):\s*(.+)$")


def load_wavefunction(path: str | Path) -> tuple[dict[str, str], np.ndarray]:
    """Metadata and the (N, 2) table of a dump."""
    meta = {}
    with open(path) as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            match = _META.match(line.strip())
            if match:
                meta[match.group(1)] = match.group(2)
    return meta, np.loadtxt(path, comments="#", ndmin=2)
