"""Flags and plumbing shared by the run commands."""

import logging
from pathlib import Path

from django.conf import settings
from django.core.management.base import CommandError

from confinement.conf import merge_options
from confinement.engine import TrialKind
from confinement.forms import RunConfigForm
from confinement.potential import POTENTIAL_NAMES
from confinement.records import FORMATS, dump_path, dump_wavefunction
from confinement.runs import EXIT_OK, EXIT_USAGE, METHODS, RunConfig, RunOutcome
from confinement.stencil import WallPolicy

RUN_OPTIONS = (
    "potential", "sign", "R", "L", "d", "N", "dtau", "tol", "psi_tol", "max_iter",
    "sustain", "n_states", "trial", "wall", "method", "format", "out", "dump_psi", "jobs",
)


def add_run_arguments(parser) -> None:
    # Every default is None so that unset flags fall through to the config
    parser.add_argument("--potential", choices=POTENTIAL_NAMES)
    parser.add_argument("--sign", type=int, choices=(1, -1), help="+1 attractive, -1 inverted")
    geometry = parser.add_mutually_exclusive_group()
    geometry.add_argument("--R", dest="R", type=float, help="half-width of the box [-R, R]")
    geometry.add_argument("--L", dest="L", type=float, help="box width; walls at -L/2+d, L/2+d")
    parser.add_argument("--d", dest="d", type=float, help="offset of the walls (with --L) or of the potential minimum")
    parser.add_argument("--N", dest="N", type=int, help="grid points, walls included")
    parser.add_argument("--dtau", type=float)
    parser.add_argument("--tol", type=float, help="energy change that counts as converged")
    parser.add_argument("--psi-tol", type=float, help="also require max|psi change| below this")
    parser.add_argument("--max-iter", type=int)
    parser.add_argument("--sustain", type=int)
    parser.add_argument("--n-states", type=int)
    parser.add_argument("--trial", choices=[kind.value for kind in TrialKind])
    parser.add_argument("--wall", choices=[policy.value for policy in WallPolicy])
    parser.add_argument("--method", choices=METHODS)
    parser.add_argument("--format", choices=FORMATS)
    parser.add_argument("--out", help="write records here instead of stdout")
    parser.add_argument("--dump-psi", help="wavefunction file; {n} is replaced by the state index")
    parser.add_argument("--jobs", type=int)


def configure_logging(verbosity: int) -> None:
    if verbosity >= 3:
        logging.getLogger("confinement").setLevel(logging.DEBUG)
    elif verbosity >= 2:
        logging.getLogger("confinement").setLevel(logging.INFO)


def build_run_config(options: dict) -> RunConfig:
    given = {key: options.get(key) for key in RUN_OPTIONS}
    merged = merge_options(given, settings.CONFINE_DEFAULTS)
    form = RunConfigForm(merged)
    if not form.is_valid():
        raise CommandError(form.error_text(), returncode=EXIT_USAGE)
    return form.to_config()


def emit(command, text: str, out: str | None) -> None:
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    else:
        command.stdout.write(text, ending="")


def dump_states(outcome: RunOutcome, template: str) -> list[Path]:
    multiple = len(outcome.states) > 1
    return [
        dump_wavefunction(
            dump_path(template, n, multiple), psi, potential=outcome.config.potential, energy=energy
        )
        for n, psi, energy in outcome.states
    ]


def finish(status: int, error: str | None) -> None:
    """Translate a run status into the command's exit status."""
    if status != EXIT_OK:
        raise CommandError(error or "run failed", returncode=status)
