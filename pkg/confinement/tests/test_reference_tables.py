import numpy as np
import pytest
from django.conf import settings

from confinement.engine import ItpConfig, solve_spectrum
from confinement.grid import make_symmetric_grid
from confinement.oracle import build_hamiltonian, lowest_eigenvalues
from confinement.potential import Harmonic, Quartic, ShiftedHarmonic, Zero
from confinement.reproduce import load_manifest, run_manifest
from confinement.runs import RunConfig, execute

pytestmark = pytest.mark.slow

SELECTED = [
    ("I", ["R0.5-N2001", "R5-N101", "R5-N2001"]),
    ("II", ["R0.1", "R0.5", "R1.0", "R3.0", "R5.0"]),
    ("III", ["R2.0", "R5.0"]),
    ("IV", ["attractive-R0.5", "inverted-R0.5"]),
    ("V", ["d0.00", "d0.36", "d0.60", "d1.08", "d1.32", "d1.92", "d2.64", "d3.00", "d3.50"]),
    ("VI", ["R1.0", "R8-free"]),
]


def report_for(table_id, cases):
    manifest = load_manifest(table_id, settings.CONFINE_REFERENCE_DIR)
    return run_manifest(manifest, RunConfig(), cases=cases, jobs=2)


class TestPublishedTables:
    @pytest.mark.parametrize("table_id,cases", SELECTED)
    def test_cells_within_tolerance(self, table_id, cases):
        report = report_for(table_id, cases)
        failed = report[~report["passed"]]
        assert failed.empty, failed[["case", "state", "quantity", "reference", "computed"]].to_string()

    def test_small_box_spot_grid_is_selected(self):
        manifest = load_manifest("II", settings.CONFINE_REFERENCE_DIR)
        selected = manifest[manifest["case"].isin(dict(SELECTED)["II"])]
        assert len(selected) >= 20
        assert set(selected["R"]) == {0.1, 0.5, 1.0, 3.0, 5.0}
        (top,) = selected[(selected["case"] == "R0.1") & (selected["state"] == 5)].itertuples()
        assert top.reference == 4441.3236190123
        assert top.tolerance <= 1e-9 * top.reference

    def test_inverted_doublet_moments_match(self):
        report = report_for("IV", ["inverted-R5"])
        assert report["passed"].all()
        x2 = report[report["quantity"] == "x2"].set_index("state")["computed"]
        assert x2[0] == pytest.approx(17.9714491, abs=1e-5)
        assert x2[1] == pytest.approx(x2[0], abs=1e-5)


class TestLargeBoxLimits:
    def test_inverted_levels_become_degenerate(self):
        outcome = execute(RunConfig(potential="inverted", R=10.0, N=4001, n_states=2))
        e0, e1 = (record.energy for record in outcome.records)
        assert outcome.ok
        assert abs(e1 - e0) <= 1e-9
        assert e0 == pytest.approx(-41.589187578860, abs=1e-6)

    def test_quartic_plateau(self):
        outcome = execute(RunConfig(potential="quartic", R=5.0, N=8001, n_states=3))
        e0, _, e2 = (record.energy for record in outcome.records)
        assert e0 == pytest.approx(0.5301810452423, abs=1e-9)
        assert e2 == pytest.approx(3.7278489689934, abs=1e-9)

    def test_wide_box_reaches_the_free_oscillator(self):
        outcome = execute(RunConfig(R=6.0, N=4001, n_states=3, method="oracle"))
        for n, record in enumerate(outcome.records):
            assert record.energy == pytest.approx(n + 0.5, abs=1e-9)


class TestOracleEquivalence:
    @pytest.mark.parametrize("seed", range(12))
    def test_random_instance(self, seed):
        rng = np.random.default_rng(seed)
        spec = [Harmonic(1), Harmonic(-1), Quartic(), ShiftedHarmonic(rng.uniform(-0.5, 0.5)), Zero()][seed % 5]
        grid = make_symmetric_grid(rng.uniform(0.5, 2.0), int(rng.choice([201, 401, 801])))
        (result,) = solve_spectrum(spec, grid, ItpConfig(), n_states=1)
        expected = lowest_eigenvalues(build_hamiltonian(spec, grid, 5), 1)[0]
        assert result.converged
        assert abs(result.energy - expected) <= 1e-10
