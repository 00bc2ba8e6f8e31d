import numpy as np
import pytest

from confinement.grid import make_symmetric_grid
from confinement.potential import Harmonic, Quartic, Zero, sample_potential
from confinement.quadrature import WaveFunction
from confinement.stencil import (
    WallPolicy,
    apply_laplacian_5pt,
    assemble_coefficients,
    assemble_rhs,
    ghosted,
)


def box_ground_state(grid):
    # cos(pi x / 2) on [-1, 1]: odd about both walls
    values = np.cos(0.5 * np.pi * grid.x)
    values[0] = values[-1] = 0.0
    return WaveFunction(values, grid)


class TestLaplacian:
    def test_exact_for_quartic_polynomials_in_the_deep_interior(self):
        grid = make_symmetric_grid(1.0, 41)
        f = grid.x**4 - 3 * grid.x**3 + grid.x
        d2 = apply_laplacian_5pt(f, grid.h)
        expected = 12 * grid.x**2 - 18 * grid.x
        assert len(d2) == grid.n_interior
        assert np.allclose(d2[1:-1], expected[2:-2], rtol=0, atol=1e-9)

    def test_fourth_order_with_image_walls(self):
        errors = []
        for n in (51, 101):
            grid = make_symmetric_grid(1.0, n)
            psi = box_ground_state(grid)
            exact = -(0.5 * np.pi) ** 2 * psi.interior
            errors.append(np.max(np.abs(apply_laplacian_5pt(psi) - exact)))
        assert 12 <= errors[0] / errors[1] <= 20

    def test_zero_ghost_breaks_the_first_row(self):
        grid = make_symmetric_grid(1.0, 101)
        psi = box_ground_state(grid)
        exact = -(0.5 * np.pi) ** 2 * psi.interior
        image = np.abs(apply_laplacian_5pt(psi, wall=WallPolicy.IMAGE) - exact)
        zero = np.abs(apply_laplacian_5pt(psi, wall=WallPolicy.ZERO) - exact)
        assert zero[0] > 1e3 * image[0]
        # rows that never reach a ghost agree
        assert np.array_equal(zero[1:-1], image[1:-1])

    def test_ghost_values(self):
        values = np.array([0.0, 1.0, 2.0, 0.0])
        assert list(ghosted(values, WallPolicy.IMAGE)) == [-1.0, 0.0, 1.0, 2.0, 0.0, -2.0]
        assert list(ghosted(values, WallPolicy.ZERO)) == [0.0, 0.0, 1.0, 2.0, 0.0, 0.0]


class TestCoefficients:
    def setup_method(self):
        self.grid = make_symmetric_grid(1.0, 21)
        self.dtau = 1e-3

    def test_closed_form_bands(self):
        coeffs = assemble_coefficients(Harmonic(1), self.grid, self.dtau)
        ratio = self.dtau / self.grid.h**2
        v = sample_potential(Harmonic(1), self.grid)[1:-1]
        assert np.allclose(coeffs.alpha, ratio / 48)
        assert np.allclose(coeffs.zeta, ratio / 48)
        assert np.allclose(coeffs.beta, -ratio / 3)
        assert np.allclose(coeffs.delta, -ratio / 3)
        assert np.allclose(coeffs.gamma, 1 + 5 * ratio / 8 + 0.5 * self.dtau * v)
        assert len(coeffs.gamma) == self.grid.n_interior

    def test_image_fold_only_in_solver_bands(self):
        coeffs = assemble_coefficients(Zero(), self.grid, self.dtau, WallPolicy.IMAGE)
        bands = coeffs.bands()
        assert bands.gamma[0] == pytest.approx(coeffs.gamma[0] - coeffs.alpha[0])
        assert bands.gamma[-1] == pytest.approx(coeffs.gamma[-1] - coeffs.zeta[-1])
        assert np.array_equal(bands.gamma[1:-1], coeffs.gamma[1:-1])
        assert coeffs.gamma[0] == coeffs.gamma[1]

    def test_zero_policy_bands_are_unfolded(self):
        coeffs = assemble_coefficients(Zero(), self.grid, self.dtau, WallPolicy.ZERO)
        assert np.array_equal(coeffs.bands().gamma, coeffs.gamma)

    def test_rhs_is_the_explicit_half_step(self):
        # xi = psi - dtau/2 (-1/2 D^2 + v) psi, built from the operator pieces
        rng = np.random.default_rng(7)
        psi = WaveFunction.from_interior(rng.standard_normal(self.grid.n_interior), self.grid)
        v = sample_potential(Harmonic(-1), self.grid)[1:-1]
        for wall in WallPolicy:
            coeffs = assemble_coefficients(Harmonic(-1), self.grid, self.dtau, wall)
            h_psi = -0.5 * apply_laplacian_5pt(psi, wall=wall) + v * psi.interior
            expected = psi.interior - 0.5 * self.dtau * h_psi
            assert np.allclose(assemble_rhs(coeffs, psi), expected, rtol=0, atol=1e-12)

    def test_rejects_nonpositive_step(self):
        with pytest.raises(ValueError):
            assemble_coefficients(Zero(), self.grid, 0.0)


class TestParity:
    def setup_method(self):
        self.grid = make_symmetric_grid(1.0, 41)
        rng = np.random.default_rng(11)
        r = rng.standard_normal(self.grid.n_points)
        even = r + r[::-1]
        odd = r - r[::-1]
        for values in (even, odd):
            values[0] = values[-1] = 0.0
        self.even, self.odd = even, odd

    @staticmethod
    def mismatch(out, sign):
        return np.max(np.abs(out - sign * out[::-1])) / np.max(np.abs(out))

    @pytest.mark.parametrize("wall", list(WallPolicy))
    def test_laplacian_commutes_with_reflection(self, wall):
        for values, sign in ((self.even, 1), (self.odd, -1)):
            out = apply_laplacian_5pt(values, self.grid.h, wall)
            assert self.mismatch(out, sign) <= 1e-13

    @pytest.mark.parametrize("spec", [Harmonic(1), Harmonic(-1), Quartic(), Zero()], ids=repr)
    def test_rhs_commutes_with_reflection(self, spec):
        coeffs = assemble_coefficients(spec, self.grid, 1e-3)
        assert np.array_equal(coeffs.gamma, coeffs.gamma[::-1])
        for values, sign in ((self.even, 1), (self.odd, -1)):
            out = assemble_rhs(coeffs, WaveFunction(values, self.grid))
            assert self.mismatch(out, sign) <= 1e-13
