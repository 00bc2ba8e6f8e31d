import math

import pandas as pd
from django.core.management.base import BaseCommand, CommandError

from confinement.potential import box_level, free_level
from confinement.records import records_frame, render
from confinement.runs import EXIT_USAGE, build_problem, run_many

from ._options import add_run_arguments, build_run_config, configure_logging, emit, finish

SWEEP_KEYS = ("R", "L", "d")


class Command(BaseCommand):
    help = "Solve the same system over a list of box sizes or offsets (plot-ready CSV)"

    def add_arguments(self, parser):
        add_run_arguments(parser)
        parser.add_argument("--over", choices=SWEEP_KEYS, required=True)
        parser.add_argument("--values", type=float, nargs="+", required=True)
        parser.add_argument(
            "--layout",
            choices=("long", "wide"),
            default="long",
            help="long: one row per state; wide: one row per sweep value with limit columns",
        )

    def handle(self, *args, **options):
        configure_logging(options["verbosity"])
        config = build_run_config(options)
        over, values = options["over"], options["values"]

        if over in ("R", "L") and not all(math.isfinite(v) and v > 0 for v in values):
            raise CommandError(f"--values for {over} must be positive", returncode=EXIT_USAGE)
        if over == "d" and not all(math.isfinite(v) for v in values):
            raise CommandError("--values for d must be finite", returncode=EXIT_USAGE)
        if over == "d" and config.L is None and config.potential != "shifted-harmonic":
            raise CommandError(
                "sweeping d needs --L or the shifted-harmonic potential", returncode=EXIT_USAGE
            )
        if over == "R" and config.d and config.potential != "shifted-harmonic":
            # an R box keeps d only as the shifted-harmonic minimum
            raise CommandError(
                "sweeping R with an offset d needs the shifted-harmonic potential; sweep L to shift the walls",
                returncode=EXIT_USAGE,
            )

        configs = [config.with_changes(**{over: value}) for value in values]
        outcomes = run_many(configs, config.jobs)

        records = [record for outcome in outcomes for record in outcome.records]
        if options["layout"] == "wide":
            frame = self.wide_frame(over, values, outcomes)
        else:
            frame = records_frame(records)
        emit(self, render(frame, config.format), config.out)

        failed = [o for o in outcomes if not o.ok]
        if failed:
            worst = max(failed, key=lambda o: o.status)
            finish(worst.status, f"{len(failed)} of {len(outcomes)} sweep points failed; {worst.error}")

    @staticmethod
    def wide_frame(over, values, outcomes) -> pd.DataFrame:
        """One row per sweep value: energies E0.. plus box and free limits per state."""
        rows = []
        for value, outcome in zip(values, outcomes):
            row = {over: value}
            method = "oracle" if outcome.config.method == "oracle" else "itp"
            try:
                spec, grid = build_problem(outcome.config)
            except ValueError:
                rows.append(row)
                continue
            for record in outcome.records:
                if record.method != method:
                    continue
                n = record.state_index
                row[f"E{n}"] = record.energy
                row[f"box_level{n}"] = box_level(grid.domain, n)
                row[f"free_level{n}"] = free_level(spec, n)
            rows.append(row)
        frame = pd.DataFrame(rows)
        states = sorted({int(c[1:]) for c in frame.columns if c.startswith("E")})
        ordered = [over] + [f"E{n}" for n in states]
        ordered += [f"box_level{n}" for n in states] + [f"free_level{n}" for n in states]
        return frame.reindex(columns=ordered)
