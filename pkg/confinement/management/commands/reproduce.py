from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from confinement.exceptions import ManifestError
from confinement.reproduce import TABLES, format_report, load_manifest, run_manifest
from confinement.runs import EXIT_NOT_CONVERGED, EXIT_USAGE

from ._options import build_run_config, configure_logging, emit


class Command(BaseCommand):
    help = "Recompute a bundled reference table and report every cell as PASS or FAIL"

    def add_arguments(self, parser):
        parser.add_argument("table", choices=TABLES)
        parser.add_argument("--case", action="append", help="only this case label (repeatable)")
        parser.add_argument("--dtau", type=float)
        parser.add_argument("--max-iter", type=int)
        parser.add_argument("--jobs", type=int)
        parser.add_argument("--out", help="write the report here instead of stdout")

    def handle(self, *args, **options):
        configure_logging(options["verbosity"])
        base = build_run_config(options)
        table = options["table"]
        try:
            manifest = load_manifest(table, settings.CONFINE_REFERENCE_DIR)
            report = run_manifest(manifest, base, cases=options["case"], jobs=base.jobs)
        except ManifestError as exc:
            raise CommandError(str(exc), returncode=EXIT_USAGE)

        emit(self, format_report(report, table), base.out)
        failed = int((~report["passed"]).sum())
        if failed:
            raise CommandError(
                f"{failed} of {len(report)} cells of Table {table} outside tolerance",
                returncode=EXIT_NOT_CONVERGED,
            )
