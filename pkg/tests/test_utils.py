"""
Unit tests for utils.py functions and exception classes.
"""

import unittest

import numpy as np

from reflectal.utils import (
    ConfigError,
    CurveTableError,
    DegenerateGeometryError,
    EmptyWindowError,
    InstabilityError,
    ReflectalError,
    UnitError,
    expand_bracket,
    sign_changes,
)


class TestExceptions(unittest.TestCase):
    """
    Unit tests for the utils.py exception classes.
    """

    def test_unit_error(self) -> None:
        """Test UnitError message and base classes."""

        err = UnitError("eV", "bohr", "Dummy message.")
        self.assertEqual(str(err), "Cannot convert eV to bohr: Dummy message.")
        self.assertIsInstance(err, ValueError)
        self.assertIsInstance(err, ReflectalError)
        self.assertEqual(err.exit_code, 2)

    def test_curve_table_error(self) -> None:
        """Test CurveTableError message with and without a line number."""

        self.assertEqual(
            str(CurveTableError("v2.dat", "bad row.", 7)), "v2.dat, line 7: bad row."
        )
        self.assertEqual(str(CurveTableError("v2.dat", "too short.")), "v2.dat: too short.")

    def test_instability_error(self) -> None:
        """Test InstabilityError names the time step and has exit code 4."""

        err = InstabilityError(1.7777, 1.01, 500.0)
        self.assertIsInstance(err, ArithmeticError)
        self.assertIn("dt = 1.7777 a.u.", str(err))
        self.assertEqual(err.exit_code, 4)

    def test_exit_codes(self) -> None:
        """Test exit codes of precondition and degenerate-result errors."""

        self.assertEqual(ConfigError("x").exit_code, 2)
        self.assertEqual(DegenerateGeometryError("x").exit_code, 3)
        self.assertEqual(EmptyWindowError("x").exit_code, 3)


class TestSignChanges(unittest.TestCase):
    """
    Unit tests for the utils.py sign_changes() function.
    """

    def test_sign_changes(self) -> None:
        """Test strict sign changes and zero crossings."""

        np.testing.assert_array_equal(sign_changes(np.array([1.0, -1.0, -2.0, 3.0])), [0, 2])
        np.testing.assert_array_equal(sign_changes(np.array([0.0, 1.0, 2.0])), [0])
        self.assertEqual(sign_changes(np.array([1.0, 2.0, 3.0])).size, 0)


class TestExpandBracket(unittest.TestCase):
    """
    Unit tests for the utils.py expand_bracket() function.
    """

    def test_bracket_found(self) -> None:
        """Test the returned pair brackets the sign change."""

        inside, outside = expand_bracket(lambda x: x - 2.5, 0.0, 0.1, 10.0)
        self.assertLess(inside, 2.5)
        self.assertGreaterEqual(outside, 2.5)

    def test_negative_direction(self) -> None:
        """Test marching towards smaller x."""

        inside, outside = expand_bracket(lambda x: -1.0 - x, 0.0, -0.1, -10.0)
        self.assertGreater(inside, -1.0)
        self.assertLessEqual(outside, -1.0)

    def test_limit_reached(self) -> None:
        """Test the limit is returned when the function stays negative."""

        inside, outside = expand_bracket(lambda x: -1.0, 0.0, 0.1, 1.0)
        self.assertEqual(outside, 1.0)
        self.assertLess(inside, 1.0)


if __name__ == "__main__":
    unittest.main()
