import math

import numpy as np
import pytest

from confinement.grid import make_asymmetric_grid, make_symmetric_grid
from confinement.oracle import build_hamiltonian, lowest_eigenpairs, lowest_eigenvalues
from confinement.potential import Harmonic, Quartic, Zero, sample_potential
from confinement.quadrature import integrate
from confinement.stencil import WallPolicy


class TestBuildHamiltonian:
    def setup_method(self):
        self.grid = make_symmetric_grid(1.0, 101)

    def test_even_potential_gives_persymmetric_diagonal(self):
        H = build_hamiltonian(Quartic(), self.grid)
        assert np.allclose(H.diagonal, H.diagonal[::-1], rtol=0, atol=1e-10)

    def test_interior_rows_sum_to_the_potential(self):
        for order in (3, 5):
            H = build_hamiltonian(Harmonic(1), self.grid, order)
            row_sums = H.matvec(np.ones(H.size))
            v = sample_potential(Harmonic(1), self.grid)[1:-1]
            assert np.allclose(row_sums[2:-2], v[2:-2], rtol=0, atol=1e-9)

    def test_image_wall_folds_the_ghost(self):
        image = build_hamiltonian(Zero(), self.grid, 5, WallPolicy.IMAGE)
        zero = build_hamiltonian(Zero(), self.grid, 5, WallPolicy.ZERO)
        inv_h2 = 1.0 / self.grid.h**2
        assert zero.diagonal[0] - image.diagonal[0] == pytest.approx(inv_h2 / 24)
        assert zero.diagonal[-1] - image.diagonal[-1] == pytest.approx(inv_h2 / 24)
        assert np.array_equal(zero.diagonal[1:-1], image.diagonal[1:-1])

    def test_dense_and_banded_forms_agree(self):
        H = build_hamiltonian(Quartic(), self.grid)
        v = np.random.default_rng(3).standard_normal(H.size)
        assert np.allclose(H.to_dense() @ v, H.matvec(v), rtol=1e-12, atol=1e-9)
        assert np.allclose(np.linalg.eigvalsh(H.to_dense())[:3], lowest_eigenvalues(H, 3), rtol=1e-10)

    def test_unknown_stencil_order(self):
        with pytest.raises(ValueError):
            build_hamiltonian(Zero(), self.grid, 4)


class TestTridiagonalOracle:
    def test_free_particle_matches_closed_form(self):
        grid = make_symmetric_grid(1.0, 201)
        H = build_hamiltonian(Zero(), grid, 3)
        m = H.size
        expected = [(1 - math.cos(k * math.pi / (m + 1))) / grid.h**2 for k in range(1, 6)]
        assert lowest_eigenvalues(H, 5) == pytest.approx(expected, rel=1e-12)

    def test_second_order_box_level(self):
        H = build_hamiltonian(Zero(), make_symmetric_grid(1.0, 801), 3)
        assert lowest_eigenvalues(H, 1)[0] == pytest.approx(math.pi**2 / 8, abs=1e-5)

    def test_bisection_matches_dense_solver(self):
        H = build_hamiltonian(Quartic(), make_symmetric_grid(2.0, 201), 3)
        dense = np.linalg.eigvalsh(H.to_dense())
        assert lowest_eigenvalues(H, 4) == pytest.approx(dense[:4], rel=1e-11)

    def test_vectors_satisfy_the_eigenproblem(self):
        grid = make_symmetric_grid(2.0, 201)
        H = build_hamiltonian(Quartic(), grid, 3)
        values, columns = lowest_eigenpairs(H, 3)
        for k in range(3):
            u = columns[1:-1, k]
            assert np.max(np.abs(H.matvec(u) - values[k] * u)) <= 1e-7


class TestPentadiagonalOracle:
    def test_box_levels(self):
        H = build_hamiltonian(Zero(), make_symmetric_grid(1.0, 801))
        expected = [math.pi**2 / 8, math.pi**2 / 2, 9 * math.pi**2 / 8]
        assert lowest_eigenvalues(H, 3) == pytest.approx(expected, abs=1e-8)

    def test_confined_oscillator(self):
        H = build_hamiltonian(Harmonic(1), make_symmetric_grid(5.0, 2001))
        expected = [0.5000000000768, 1.5000000036719, 2.5000000840188]
        assert lowest_eigenvalues(H, 3) == pytest.approx(expected, abs=1e-9)

    def test_shifted_box(self):
        symmetric = build_hamiltonian(Zero(), make_symmetric_grid(1.0, 401))
        shifted = build_hamiltonian(Zero(), make_asymmetric_grid(2.0, 0.7, 401))
        assert lowest_eigenvalues(shifted, 2) == pytest.approx(lowest_eigenvalues(symmetric, 2), rel=1e-12)

    def test_inverted_oscillator_levels_pair_up(self):
        H = build_hamiltonian(Harmonic(-1), make_symmetric_grid(10.0, 2001))
        e0, e1 = lowest_eigenvalues(H, 2)
        assert e0 <= e1
        assert e1 - e0 <= 1e-6

    def test_too_many_states(self):
        H = build_hamiltonian(Zero(), make_symmetric_grid(1.0, 11))
        with pytest.raises(ValueError):
            lowest_eigenvalues(H, H.size + 1)
        with pytest.raises(ValueError):
            lowest_eigenvalues(H, 0)


class TestEigenpairs:
    def setup_method(self):
        self.grid = make_symmetric_grid(2.0, 401)
        self.H = build_hamiltonian(Quartic(), self.grid)
        self.values, self.columns = lowest_eigenpairs(self.H, 4)

    def test_shape_and_walls(self):
        assert self.columns.shape == (self.grid.n_points, 4)
        assert np.all(self.columns[0] == 0.0)
        assert np.all(self.columns[-1] == 0.0)

    def test_normalized_and_signed(self):
        for k in range(4):
            column = self.columns[:, k]
            assert integrate(column**2, self.grid) == pytest.approx(1.0, abs=1e-12)
            assert column[np.argmax(np.abs(column))] > 0

    def test_values_ascend(self):
        assert np.all(np.diff(self.values) > 0)

    def test_parity_alternates(self):
        for k in range(4):
            column = self.columns[:, k]
            mirrored = column[::-1] if k % 2 == 0 else -column[::-1]
            assert np.max(np.abs(column - mirrored)) <= 1e-8
