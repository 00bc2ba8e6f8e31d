import math

import numpy as np
import pytest

from confinement.exceptions import PotentialError
from confinement.grid import BoxDomain, make_symmetric_grid
from confinement.potential import (
    POTENTIAL_NAMES,
    Harmonic,
    Quartic,
    ShiftedHarmonic,
    Zero,
    box_level,
    eval_potential,
    free_level,
    is_even,
    potential_center,
    potential_from_name,
    potential_name,
    sample_potential,
)


class TestEvalPotential:
    def test_closed_forms(self):
        assert eval_potential(Harmonic(1), 2.0) == 2.0
        assert eval_potential(Harmonic(-1), 2.0) == -2.0
        assert eval_potential(Quartic(), 2.0) == 8.0
        assert eval_potential(ShiftedHarmonic(1.0), 1.0) == 0.0
        assert eval_potential(ShiftedHarmonic(1.0), 3.0) == 2.0
        assert eval_potential(Zero(), 7.0) == 0.0

    def test_sample_on_nine_point_grid(self):
        # abscissae -1, -0.75, ..., 1
        grid = make_symmetric_grid(1.0, 9)
        expected = 0.5 * np.linspace(-1.0, 1.0, 9) ** 2
        assert np.allclose(sample_potential(Harmonic(1), grid), expected, rtol=0, atol=1e-15)
        assert np.allclose(sample_potential(Harmonic(-1), grid), -expected, rtol=0, atol=1e-15)
        assert np.all(sample_potential(Zero(), grid) == 0.0)
        assert sample_potential(Zero(), grid).shape == (9,)

    def test_even_potentials_sample_palindromically(self):
        grid = make_symmetric_grid(2.0, 101)
        for spec in (Harmonic(1), Harmonic(-1), Quartic(), Zero()):
            v = sample_potential(spec, grid)
            assert np.array_equal(v, v[::-1])
            assert is_even(spec)
        assert not is_even(ShiftedHarmonic(0.3))

    def test_rejects_bad_sign(self):
        with pytest.raises(PotentialError):
            Harmonic(0)
        with pytest.raises(PotentialError):
            Harmonic(2)

    def test_rejects_nonfinite_offset(self):
        with pytest.raises(PotentialError):
            ShiftedHarmonic(float("nan"))


class TestNames:
    def test_every_name_resolves_and_round_trips(self):
        for name in POTENTIAL_NAMES:
            assert potential_name(potential_from_name(name)) == name

    def test_centers(self):
        assert potential_center(ShiftedHarmonic(-0.54)) == -0.54
        for spec in (Harmonic(1), Harmonic(-1), Quartic(), Zero()):
            assert potential_center(spec) == 0.0

    def test_named_parameters(self):
        assert potential_from_name("harmonic", sign=-1) == Harmonic(-1)
        assert potential_from_name("inverted") == Harmonic(-1)
        assert potential_from_name("shifted-harmonic", d=1.08) == ShiftedHarmonic(1.08)

    def test_unknown_name(self):
        with pytest.raises(PotentialError):
            potential_from_name("morse")


class TestLimitingLevels:
    def test_box_levels(self):
        domain = BoxDomain(-1.0, 1.0)
        assert box_level(domain, 0) == pytest.approx(math.pi**2 / 8)
        assert box_level(domain, 2) == pytest.approx(9 * math.pi**2 / 8)
        assert box_level(BoxDomain(2.0, 4.0), 1) == pytest.approx(math.pi**2 / 2)

    def test_free_levels(self):
        assert free_level(Harmonic(1), 2) == 2.5
        assert free_level(ShiftedHarmonic(0.5), 0) == 0.5
        assert free_level(Quartic(), 0) == pytest.approx(0.530181045242)
        assert math.isnan(free_level(Quartic(), 7))
        assert math.isnan(free_level(Harmonic(-1), 0))
        assert math.isnan(free_level(Zero(), 0))
