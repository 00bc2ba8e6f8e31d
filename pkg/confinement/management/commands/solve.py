from django.core.management.base import BaseCommand

from confinement.records import render_records
from confinement.runs import run_point

from ._options import add_run_arguments, build_run_config, configure_logging, dump_states, emit, finish


class Command(BaseCommand):
    help = "Solve one confined system for its lowest states and print the records"

    def add_arguments(self, parser):
        add_run_arguments(parser)

    def handle(self, *args, **options):
        configure_logging(options["verbosity"])
        config = build_run_config(options)

        outcome = run_point(config)
        emit(self, render_records(outcome.records, config.format), config.out)
        if config.dump_psi:
            dump_states(outcome, config.dump_psi)
        finish(outcome.status, outcome.error)
