"""
Unit tests for curves.py classes and functions.
"""

import unittest

import numpy as np

from reflectal.converters import convert
from reflectal.curves import (
    CHANNEL_ASYMPTOTES,
    SPIN_ORBIT_I,
    CurveSet,
    SplineCurve,
    SurrogateParameters,
    dress,
    extract_features,
    spline,
    surrogate_hi,
)
from reflectal.fileio import CurveTable
from reflectal.utils import (
    CurveSetError,
    DegenerateGeometryError,
    TopologyNotFoundError,
)

F0 = 5.34e-3


class TestSplineCurve(unittest.TestCase):
    """
    Unit tests for the SplineCurve class and spline() function.
    """

    def setUp(self) -> None:
        self.r = np.linspace(0.0, np.pi, 101)
        self.curve = SplineCurve(self.r, np.sin(self.r))

    def test_knots(self) -> None:
        """Test the spline passes through the knots."""

        np.testing.assert_allclose(self.curve(self.r), np.sin(self.r), atol=1e-14)

    def test_interpolation(self) -> None:
        """Test accuracy between the knots."""

        mid = 0.5 * (self.r[1:] + self.r[:-1])
        self.assertLess(float(np.max(np.abs(self.curve(mid) - np.sin(mid)))), 1e-7)
        self.assertLess(float(np.max(np.abs(self.curve.derivative(mid) - np.cos(mid)))), 1e-5)

    def test_linear_extension(self) -> None:
        """Test value and slope continue linearly beyond the data."""

        self.assertAlmostEqual(self.curve(np.pi + 1.0), -1.0, places=4)
        self.assertAlmostEqual(self.curve(-0.5), -0.5, places=4)
        self.assertAlmostEqual(self.curve.derivative(np.pi + 2.0), -1.0, places=4)
        self.assertIsInstance(self.curve(1.0), float)

    def test_fourth_order_convergence(self) -> None:
        """Test the interpolation error of sin on [0, pi] falls as h^4."""

        steps, errors = [], []
        for n in (11, 21, 41, 81):
            r = np.linspace(0.0, np.pi, n)
            curve = SplineCurve(r, np.sin(r))
            mid = 0.5 * (r[1:] + r[:-1])
            steps.append(r[1] - r[0])
            errors.append(float(np.max(np.abs(curve(mid) - np.sin(mid)))))
        slope = np.polyfit(np.log(steps), np.log(errors), 1)[0]
        self.assertAlmostEqual(slope, 4.0, delta=0.5)

    def test_spline_from_table(self) -> None:
        """Test spline() of a CurveTable."""

        table = CurveTable(np.arange(1.0, 6.0), np.arange(1.0, 6.0) ** 2)
        curve = spline(table)
        self.assertAlmostEqual(curve(3.0), 9.0)
        self.assertEqual(curve.r_min, 1.0)
        self.assertEqual(curve.r_max, 5.0)


class TestSurrogate(unittest.TestCase):
    """
    Unit tests for the SurrogateParameters class and surrogate_hi() function.
    """

    def test_defaults(self) -> None:
        """Test the default surrogate curve set."""

        curves = surrogate_hi()
        params = SurrogateParameters()
        self.assertEqual(curves.asymptotes, CHANNEL_ASYMPTOTES)
        self.assertEqual(curves.domain, (1.5, 10.0))
        self.assertAlmostEqual(curves.potential(1, params.morse_r_e), 0.0)
        self.assertAlmostEqual(
            curves.potential(3, 50.0) - curves.potential(2, 50.0), SPIN_ORBIT_I
        )
        self.assertAlmostEqual(curves.dipole(2, 3.0), 0.15)
        self.assertEqual(curves.channels_to("I"), (2, 4))

    def test_overrides(self) -> None:
        """Test parameter overrides and the spin-orbit shortcut."""

        curves = surrogate_hi(b4=1.95, spin_orbit=0.05)
        self.assertAlmostEqual(curves.potential(3, 60.0) - curves.potential(4, 60.0), 0.05)
        params = SurrogateParameters().override(mu12=[0.3, 3.0, 1.0])
        self.assertEqual(params.mu12, (0.3, 3.0, 1.0))

    def test_invalid(self) -> None:
        """Test CurveSetError on invalid surrogate parameters."""

        with self.assertRaises(CurveSetError):
            surrogate_hi(morse_depth=-0.1)
        with self.assertRaises(CurveSetError):
            surrogate_hi(c4=0.2)
        with self.assertRaises(CurveSetError):
            surrogate_hi(spin_orbit=-0.01)
        with self.assertRaises(CurveSetError):
            surrogate_hi(b2=0.0)
        with self.assertRaises(CurveSetError):
            surrogate_hi(not_a_parameter=1.0)


class TestCurveSet(unittest.TestCase):
    """
    Unit tests for the CurveSet class.
    """

    def test_potential_matrix(self) -> None:
        """Test the coupled potential matrix."""

        curves = surrogate_hi()
        r = np.array([2.5, 3.0, 4.0])
        matrix = curves.potential_matrix(r, 0.01)
        self.assertEqual(matrix.shape, (3, 4, 4))
        np.testing.assert_allclose(matrix, np.swapaxes(matrix, 1, 2))
        np.testing.assert_allclose(matrix[:, 1, 1], curves.potential(2, r))
        np.testing.assert_allclose(matrix[:, 0, 2], -0.01 * curves.dipole(3, r))
        self.assertTrue(np.all(matrix[:, 1, 2] == 0.0))

    def test_from_tables(self) -> None:
        """Test a curve set built from tables takes the common R range."""

        params = SurrogateParameters()
        r = np.linspace(1.5, 10.0, 200)
        potentials = (
            CurveTable(r, params.v1(r)),
            CurveTable(r, params.repulsive(2, r)),
            CurveTable(r, params.repulsive(3, r)),
            CurveTable(r[5:], params.repulsive(4, r[5:])),
        )
        dipoles = tuple(
            CurveTable(r, params.dipole(ch, r), value_unit="au_dipole") for ch in (2, 3, 4)
        )
        curves = CurveSet.from_tables(params.mass, potentials, dipoles)
        self.assertEqual(curves.domain, (r[5], 10.0))
        self.assertAlmostEqual(curves.potential(2, 3.3), params.repulsive(2, 3.3), places=6)

    def test_checks(self) -> None:
        """Test CurveSetError on inconsistent curve sets."""

        flat = lambda r: np.zeros_like(np.asarray(r, dtype=float))
        high = lambda r: np.full_like(np.asarray(r, dtype=float), 0.1)
        with self.assertRaises(CurveSetError):
            CurveSet(1000.0, (flat, high, high), (flat, flat, flat), (1.0, 5.0))
        with self.assertRaises(CurveSetError):
            CurveSet(-1.0, (flat, high, high, high), (flat, flat, flat), (1.0, 5.0))
        with self.assertRaises(CurveSetError):
            CurveSet(1000.0, (flat, flat, high, high), (flat, flat, flat), (1.0, 5.0))
        with self.assertRaises(CurveSetError):
            CurveSet(
                1000.0,
                (flat, high, high, high),
                (flat, flat, flat),
                (1.0, 5.0),
                asymptotes={2: "I", 3: "Br", 4: "I"},
            )
        curves = CurveSet(1000.0, (flat, high, high, high), (flat, flat, flat), (1.0, 5.0))
        self.assertEqual(curves.mass, 1000.0)


class TestDress(unittest.TestCase):
    """
    Unit tests for the DressedPair class and dress() function.
    """

    def setUp(self) -> None:
        self.curves = surrogate_hi()
        self.omega = convert(4.0, "eV", "hartree")

    def test_pair(self) -> None:
        """Test dressed diabats, coupling and adiabats."""

        pair = dress(self.curves, 2, self.omega, F0)
        r = np.linspace(2.0, 6.0, 50)
        np.testing.assert_allclose(pair.diabat1(r), self.curves.potential(1, r) + self.omega)
        np.testing.assert_allclose(pair.coupling(r), self.curves.dipole(2, r) * F0 / 2)
        lower, upper = pair.adiabats(r)
        self.assertTrue(np.all(lower <= np.minimum(pair.diabat1(r), pair.diabat2(r))))
        self.assertTrue(np.all(upper >= np.maximum(pair.diabat1(r), pair.diabat2(r))))
        np.testing.assert_allclose(lower + upper, pair.diabat1(r) + pair.diabat2(r))

    def test_invalid(self) -> None:
        """Test CurveSetError on invalid channel, photon energy and field."""

        with self.assertRaises(CurveSetError):
            dress(self.curves, 1, self.omega, F0)
        with self.assertRaises(CurveSetError):
            dress(self.curves, 2, 0.0, F0)
        with self.assertRaises(CurveSetError):
            dress(self.curves, 2, self.omega, -1.0)


class TestExtractFeatures(unittest.TestCase):
    """
    Unit tests for the extract_features() function.
    """

    def setUp(self) -> None:
        self.curves = surrogate_hi()
        self.omega = convert(4.0, "eV", "hartree")

    def test_features(self) -> None:
        """Test the crossing geometry at 4 eV on channel 2."""

        pair = dress(self.curves, 2, self.omega, F0)
        features = extract_features(pair)
        self.assertAlmostEqual(features.r_x, 3.45, delta=0.05)
        self.assertAlmostEqual(
            float(pair.diabat1(features.r_x)), float(pair.diabat2(features.r_x)), places=10
        )
        self.assertGreater(features.e_b, features.e_t)
        self.assertGreater(abs(features.x_b - features.x_t), 1e-4)
        self.assertAlmostEqual(features.e_t, float(pair.lower(features.x_t)))
        self.assertAlmostEqual(features.e_b, float(pair.upper(features.x_b)))
        self.assertTrue(0.0 < features.gamma < 1.0)
        self.assertGreater(features.alpha, 0.0)
        self.assertEqual(features.mass, self.curves.mass)

    def test_extrema(self) -> None:
        """Test x_t is a local maximum of E_1 and x_b a local minimum of E_2."""

        pair = dress(self.curves, 3, self.omega, F0)
        features = extract_features(pair)
        h = 1e-5
        self.assertGreaterEqual(features.e_t, float(pair.lower(features.x_t - h)))
        self.assertGreaterEqual(features.e_t, float(pair.lower(features.x_t + h)))
        self.assertLessEqual(features.e_b, float(pair.upper(features.x_b - h)))
        self.assertLessEqual(features.e_b, float(pair.upper(features.x_b + h)))

    def test_gap_grows_with_coupling(self) -> None:
        """Test E_b - E_t is nondecreasing in the field amplitude."""

        for channel in (2, 3, 4):
            gaps = []
            for scale in (0.5, 0.75, 1.0, 1.5):
                features = extract_features(dress(self.curves, channel, self.omega, scale * F0))
                gaps.append(features.e_b - features.e_t)
            self.assertTrue(np.all(np.diff(gaps) >= 0.0), gaps)

    def test_step_refinement(self) -> None:
        """Test halving the search step moves x_t and x_b by less than 1e-5 bohr."""

        for channel in (2, 3, 4):
            pair = dress(self.curves, channel, self.omega, F0)
            coarse = extract_features(pair, step=1e-3)
            fine = extract_features(pair, step=5e-4)
            self.assertLess(abs(coarse.x_t - fine.x_t), 1e-5)
            self.assertLess(abs(coarse.x_b - fine.x_b), 1e-5)
            self.assertAlmostEqual(coarse.r_x, fine.r_x, places=8)

    def test_all_channels(self) -> None:
        """Test every excited channel crosses the dressed ground state at 4 eV."""

        for channel in (2, 3, 4):
            features = extract_features(dress(self.curves, channel, self.omega, F0))
            self.assertTrue(1.5 < features.r_x < 10.0)

    def test_zero_field(self) -> None:
        """Test a zero field leaves a degenerate (unavoided) crossing."""

        with self.assertRaises(DegenerateGeometryError):
            extract_features(dress(self.curves, 2, self.omega, 0.0))

    def test_no_crossing(self) -> None:
        """Test TopologyNotFoundError when the dressed ground state lies above channel 2."""

        with self.assertRaises(TopologyNotFoundError):
            extract_features(dress(self.curves, 2, 3.0, F0))


if __name__ == "__main__":
    unittest.main()
