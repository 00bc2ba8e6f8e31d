"""Run defaults read from the environment (or the ITP_CONFINE_CONFIG file)."""

from typing import Any

import environ

# Half-width used when no source names a geometry
DEFAULT_HALF_WIDTH = 1.0

GEOMETRY_KEYS = ("R", "L")


def defaults_from_env(env: environ.Env) -> dict[str, Any]:
    """Map ITP_* variables to RunConfig field names.

    Geometry keys default to None so a config file naming only ``ITP_L``
    does not collide with a built-in ``R``.
    """
    return {
        "potential": env.str("ITP_POTENTIAL", default="harmonic"),
        "sign": env.int("ITP_SIGN", default=1),
        "R": env.float("ITP_R", default=None),
        "L": env.float("ITP_L", default=None),
        "d": env.float("ITP_D", default=0.0),
        "N": env.int("ITP_N", default=2001),
        "dtau": env.float("ITP_DTAU", default=1e-3),
        "tol": env.float("ITP_TOL", default=1e-13),
        "psi_tol": env.float("ITP_PSI_TOL", default=None),
        "max_iter": env.int("ITP_MAX_ITER", default=1_000_000),
        "sustain": env.int("ITP_SUSTAIN", default=3),
        "n_states": env.int("ITP_N_STATES", default=1),
        "trial": env.str("ITP_TRIAL", default="parity-alternating"),
        "wall": env.str("ITP_WALL", default="image"),
        "method": env.str("ITP_METHOD", default="itp"),
        "format": env.str("ITP_FORMAT", default="csv"),
        "jobs": env.int("ITP_JOBS", default=1),
    }


def merge_options(options: dict[str, Any], defaults: dict[str, Any]) -> dict[str, Any]:
    """Overlay command-line options (None = not given) on configured defaults."""
    merged = dict(defaults)
    for key, value in options.items():
        if value is not None:
            merged[key] = value

    # The geometry group comes as a whole from the strongest source naming it
    if any(options.get(key) is not None for key in GEOMETRY_KEYS):
        for key in GEOMETRY_KEYS:
            merged[key] = options.get(key)
    elif all(merged.get(key) is None for key in GEOMETRY_KEYS):
        merged["R"] = DEFAULT_HALF_WIDTH
    return merged
