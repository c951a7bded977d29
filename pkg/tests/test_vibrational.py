"""
Unit tests for vibrational.py classes and functions.
"""

import unittest

import numpy as np

from reflectal.curves import SurrogateParameters
from reflectal.grid import make_grid
from reflectal.utils import ResolutionError
from reflectal.vibrational import eigensolve, kinetic_matrix


def morse_level(params: SurrogateParameters, v: int) -> float:
    """Closed-form Morse level energy above the well bottom."""

    omega_e = params.morse_range * np.sqrt(2.0 * params.morse_depth / params.mass)
    x = omega_e * (v + 0.5)
    return x - x**2 / (4.0 * params.morse_depth)


class TestKineticMatrix(unittest.TestCase):
    """
    Unit tests for the kinetic_matrix() function.
    """

    def test_plane_wave_eigenvalues(self) -> None:
        """Test the eigenvalues are k^2 / 2m on the grid momenta."""

        grid = make_grid(0.0, 10.0, 32)
        kinetic = kinetic_matrix(grid, 2.0)
        np.testing.assert_allclose(kinetic, kinetic.T, atol=1e-14)
        np.testing.assert_allclose(
            np.sort(np.linalg.eigvalsh(kinetic)),
            np.sort(grid.momenta**2 / 4.0),
            atol=1e-10,
        )


class TestEigensolve(unittest.TestCase):
    """
    Unit tests for the eigensolve() function.
    """

    def test_harmonic(self) -> None:
        """Test harmonic oscillator levels to 1e-9 relative."""

        grid = make_grid(-10.0, 10.0, 256)
        omega = 0.7
        states = eigensolve(lambda r: 0.5 * 3.0 * omega**2 * r**2, 3.0, grid, 6)
        for state in states:
            exact = omega * (state.v + 0.5)
            self.assertLess(abs(state.energy - exact) / exact, 1e-9)

    def test_morse(self) -> None:
        """Test the surrogate ground state against the Morse spectrum."""

        params = SurrogateParameters()
        grid = make_grid(1.5, 10.0, 1024)
        states = eigensolve(params.v1, params.mass, grid, 9)
        for state in states:
            self.assertAlmostEqual(state.energy, morse_level(params, state.v), delta=1e-8)

    def test_grid_doubling(self) -> None:
        """Test doubling the number of grid points changes the levels by less than 1e-10 Ha."""

        params = SurrogateParameters()
        coarse = eigensolve(params.v1, params.mass, make_grid(1.5, 10.0, 1024), 6)
        fine = eigensolve(params.v1, params.mass, make_grid(1.5, 10.0, 2048), 6)
        for a, b in zip(coarse, fine):
            self.assertLess(abs(a.energy - b.energy), 1e-10)

    def test_states(self) -> None:
        """Test normalization, orthogonality, node count and sign convention."""

        params = SurrogateParameters()
        grid = make_grid(1.5, 10.0, 512)
        states = eigensolve(params.v1, params.mass, grid, 6)
        energies = [s.energy for s in states]
        self.assertEqual(energies, sorted(energies))
        for state in states:
            self.assertAlmostEqual(state.norm, 1.0, places=10)
            self.assertEqual(state.nodes, state.v)
            lobe = np.nonzero(np.abs(state.chi) > 0.01 * np.max(np.abs(state.chi)))[0][0]
            self.assertGreater(state.chi[lobe], 0.0)
            self.assertFalse(state.chi.flags.writeable)
        self.assertAlmostEqual(states[0].overlap(states[3]), 0.0, places=10)

    def test_to_frame(self) -> None:
        """Test the eigenstate export columns."""

        grid = make_grid(-10.0, 10.0, 128)
        frame = eigensolve(lambda r: 0.5 * r**2, 1.0, grid, 2)[1].to_frame()
        self.assertEqual(list(frame.columns), ["R", "chi_1(R)"])
        self.assertEqual(len(frame), 128)

    def test_resolution_errors(self) -> None:
        """Test ResolutionError on unbound and boundary-limited states."""

        params = SurrogateParameters()
        with self.assertRaises(ResolutionError):
            eigensolve(params.v1, params.mass, make_grid(1.5, 10.0, 512), 40)
        with self.assertRaises(ResolutionError):
            eigensolve(lambda r: 0.5 * r**2, 1.0, make_grid(-3.0, 3.0, 64), 1)
        with self.assertRaises(ResolutionError):
            eigensolve(lambda r: 0.5 * r**2, 1.0, make_grid(-10.0, 10.0, 64), 0)


if __name__ == "__main__":
    unittest.main()
