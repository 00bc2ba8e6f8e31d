from django.core.management.base import BaseCommand, CommandError

from confinement.records import render
from confinement.runs import EXIT_NOT_CONVERGED, EXIT_USAGE
from confinement.studies import convergence_table, validate_grid_sizes

from ._options import add_run_arguments, build_run_config, configure_logging, emit, finish


class Command(BaseCommand):
    help = "Energy of one state on a ladder of grids, with Richardson order estimates"

    def add_arguments(self, parser):
        add_run_arguments(parser)
        parser.add_argument("--grid-sizes", type=int, nargs="+", required=True)
        parser.add_argument("--state", type=int, default=0)

    def handle(self, *args, **options):
        configure_logging(options["verbosity"])
        config = build_run_config(options)
        state = options["state"]
        if state < 0:
            raise CommandError("--state must be non-negative", returncode=EXIT_USAGE)
        try:
            sizes = validate_grid_sizes(options["grid_sizes"])
        except ValueError as exc:
            raise CommandError(str(exc), returncode=EXIT_USAGE)
        if sizes[0] < 9:
            raise CommandError("grid sizes must be at least 9", returncode=EXIT_USAGE)

        frame, outcomes = convergence_table(config, sizes, state=state, jobs=config.jobs)
        emit(self, render(frame, config.format), config.out)

        failed = [o for o in outcomes if not o.ok]
        if failed:
            worst = max(failed, key=lambda o: o.status)
            finish(worst.status, worst.error)
        if not frame["converged"].all():
            finish(EXIT_NOT_CONVERGED, f"state {state} did not converge on every grid")
