"""
Unit tests for propagation.py classes and functions.
"""

import unittest
from unittest.mock import patch

import numpy as np

from reflectal.converters import convert
from reflectal.curves import CurveSet, surrogate_hi
from reflectal.grid import make_grid
from reflectal.propagation import (
    FieldSpec,
    PropagationConfig,
    SplitOperatorPropagator,
    WavepacketState,
    apply_cap,
    build_field,
    propagate,
    split_coefficients,
)
from reflectal.utils import ConfigError, InstabilityError, DetectorError
from reflectal.vibrational import VibrationalState, eigensolve

F0 = 5.34e-3


def constant(value: float):
    """Curve with a constant value."""

    return lambda r: np.full_like(np.asarray(r, dtype=float), value)


def flat_curves(levels, dipoles, mass: float = 1.0, domain=(0.0, 40.0)) -> CurveSet:
    """Curve set of constant potentials and dipoles."""

    return CurveSet(
        mass,
        tuple(constant(v) for v in levels),
        tuple(constant(mu) for mu in dipoles),
        domain,
        check=False,
    )


def gaussian(grid, x0: float, k0: float, sigma: float) -> np.ndarray:
    """Normalized Gaussian wavepacket with position spread ``sigma``."""

    phi = np.exp(-((grid.points - x0) ** 2) / (4.0 * sigma**2) + 1j * k0 * grid.points)
    return phi / np.sqrt(np.sum(np.abs(phi) ** 2) * grid.spacing)


class TestSplitCoefficients(unittest.TestCase):
    """
    Unit tests for the split_coefficients() function.
    """

    def test_coefficients(self) -> None:
        """Test the compositions are symmetric and consistent."""

        c, d = split_coefficients(2)
        np.testing.assert_allclose(c, [0.5, 0.5])
        np.testing.assert_allclose(d, [1.0])
        for order, n_potential in ((4, 3), (6, 7)):
            c, d = split_coefficients(order)
            self.assertEqual(len(d), n_potential)
            self.assertEqual(len(c), n_potential + 1)
            self.assertAlmostEqual(float(np.sum(c)), 1.0, places=14)
            self.assertAlmostEqual(float(np.sum(d)), 1.0, places=14)
            np.testing.assert_allclose(c, c[::-1], atol=1e-15)
            np.testing.assert_allclose(d, d[::-1], atol=1e-15)

    def test_invalid_order(self) -> None:
        """Test ConfigError for unsupported orders."""

        with self.assertRaises(ConfigError):
            split_coefficients(3)


class TestLaserField(unittest.TestCase):
    """
    Unit tests for the FieldSpec and LaserField classes and build_field() function.
    """

    def test_envelope(self) -> None:
        """Test the sin^2 switch-on over 10 cycles."""

        spec = FieldSpec(0.01, 0.15, 2000.0)
        field = build_field(spec)
        self.assertAlmostEqual(field.tau, 10.0 * 2.0 * np.pi / 0.15)
        self.assertEqual(field(0.0), 0.0)
        self.assertAlmostEqual(field.envelope(0.5 * field.tau), 0.5)
        self.assertEqual(field.envelope(field.tau), 1.0)
        t = 1.3 * field.tau
        self.assertAlmostEqual(field(t), 0.01 * np.cos(0.15 * t))

    def test_short_ramp_warning(self) -> None:
        """Test a warning for a ramp shorter than 5 cycles."""

        spec = FieldSpec(0.01, 0.15, 2000.0, ramp=2.0 * 2.0 * np.pi / 0.15)
        with self.assertLogs("reflectal.propagation", level="WARNING"):
            field = build_field(spec)
        self.assertAlmostEqual(field.envelope(spec.ramp), 1.0)

    def test_zero_ramp(self) -> None:
        """Test a zero ramp switches the field on at once."""

        with self.assertLogs("reflectal.propagation", level="WARNING"):
            field = build_field(FieldSpec(0.01, 0.15, 100.0, ramp=0.0))
        self.assertEqual(field.envelope(1e-9), 1.0)

    def test_invalid(self) -> None:
        """Test ConfigError for invalid field parameters."""

        with self.assertRaises(ConfigError):
            FieldSpec(-0.01, 0.15, 100.0)
        with self.assertRaises(ConfigError):
            FieldSpec(0.01, 0.0, 100.0)
        with self.assertRaises(ConfigError):
            FieldSpec(0.01, 0.15, -1.0)
        with self.assertRaises(ConfigError):
            FieldSpec(0.01, 0.15, 100.0, ramp=-5.0)


class TestPropagationConfig(unittest.TestCase):
    """
    Unit tests for the PropagationConfig class.
    """

    def test_defaults(self) -> None:
        """Test the default time step is 0.043 fs."""

        config = PropagationConfig()
        self.assertAlmostEqual(config.time_step, convert(0.043, "fs", "au_time"))
        self.assertTrue(config.cap_enabled)
        self.assertFalse(PropagationConfig(cap_strength=0.0).cap_enabled)

    def test_invalid(self) -> None:
        """Test ConfigError and DetectorError for invalid parameters."""

        with self.assertRaises(ConfigError):
            PropagationConfig(time_step=0.0)
        with self.assertRaises(ConfigError):
            PropagationConfig(output_stride=0)
        with self.assertRaises(ConfigError):
            PropagationConfig(cap_width=0.0)
        with self.assertRaises(ConfigError):
            PropagationConfig(order=5)
        with self.assertRaises(DetectorError):
            PropagationConfig(detector=9.5)

    def test_check_grid(self) -> None:
        """Test the detector and absorbing potential must fit on the grid."""

        grid = make_grid(1.5, 10.0, 256)
        PropagationConfig().check_grid(grid)
        with self.assertRaises(DetectorError):
            PropagationConfig(cap_onset=9.5).check_grid(grid)
        with self.assertRaises(DetectorError):
            PropagationConfig(detector=1.5 + grid.spacing).check_grid(grid)


class TestApplyCap(unittest.TestCase):
    """
    Unit tests for the apply_cap() function.
    """

    def setUp(self) -> None:
        self.grid = make_grid(1.5, 10.0, 256)
        self.state = WavepacketState(0.0, np.ones((4, 256), dtype=complex), self.grid)

    def test_excited_channels(self) -> None:
        """Test only excited channels beyond the onset are damped."""

        damped = apply_cap(self.state, PropagationConfig(), 1.0)
        inside = self.grid.points < 9.0
        np.testing.assert_array_equal(damped.amplitudes[0], 1.0)
        np.testing.assert_array_equal(damped.amplitudes[1:, inside], 1.0)
        self.assertAlmostEqual(abs(damped.amplitudes[2, -1]), np.exp(-0.15), places=12)
        np.testing.assert_array_equal(self.state.amplitudes, 1.0)

    def test_ground_channel(self) -> None:
        """Test the optional absorption on the ground channel."""

        damped = apply_cap(self.state, PropagationConfig(cap_ground=True), 1.0)
        self.assertLess(abs(damped.amplitudes[0, -1]), 1.0)
        undamped = apply_cap(self.state, PropagationConfig(cap_strength=0.0), 1.0)
        self.assertIs(undamped, self.state)


class TestSplitOperatorPropagator(unittest.TestCase):
    """
    Unit tests for the SplitOperatorPropagator class.
    """

    def test_free_gaussian(self) -> None:
        """Test a free Gaussian moves at k0 / m and spreads analytically."""

        grid = make_grid(0.0, 48.0, 1024)
        curves = flat_curves((0.0, 0.0, 0.0, 0.0), (0.0, 0.0, 0.0), domain=(0.0, 48.0))
        config = PropagationConfig(time_step=0.005, cap_strength=0.0)
        field = build_field(FieldSpec(0.0, 1.0, 5.0))
        propagator = SplitOperatorPropagator(curves, grid, field, config)

        amplitudes = np.zeros((4, grid.n), dtype=complex)
        amplitudes[0] = gaussian(grid, 14.0, 2.0, 1.0)
        state = WavepacketState(0.0, amplitudes, grid)
        for _ in range(1000):
            state = propagator.step(state)

        self.assertAlmostEqual(state.t, 5.0, places=10)
        density = np.abs(state.amplitudes[0]) ** 2 * grid.spacing
        mean = float(np.sum(density * grid.points))
        width = float(np.sqrt(np.sum(density * (grid.points - mean) ** 2)))
        self.assertAlmostEqual(mean, 24.0, delta=1e-8)
        self.assertAlmostEqual(width, np.sqrt(1.0 + 2.5**2), delta=1e-7)
        self.assertLess(abs(state.norm() - 1.0), 1e-8)

    def test_rabi_transfer(self) -> None:
        """Test resonant two-level transfer reaches one half at the Rabi quarter period."""

        grid = make_grid(0.0, 7.0, 8)
        curves = flat_curves((0.0, 0.2, 10.0, 10.0), (1.0, 0.0, 0.0), domain=(0.0, 7.0))
        amplitude, omega = 1.0e-4, 0.2
        ramp = 10.0 * 2.0 * np.pi / omega
        duration = 0.5 * ramp + 0.5 * np.pi / amplitude
        config = PropagationConfig(
            time_step=1.0,
            detector=3.0,
            output_stride=1000,
            cap_onset=5.0,
            cap_width=1.0,
            cap_strength=0.0,
        )
        chi = np.full(8, 1.0 / np.sqrt(8.0 * grid.spacing))
        initial = VibrationalState(0, 0.0, chi, grid, np.zeros(8))
        field = build_field(FieldSpec(amplitude, omega, duration))
        result = propagate(initial, curves, field, config)

        self.assertAlmostEqual(result.norms[-1, 1], 0.5, delta=2e-3)
        self.assertLess(result.norms[-1, 2] + result.norms[-1, 3], 1e-12)
        np.testing.assert_allclose(result.norms.sum(axis=1), 1.0, atol=1e-10)

    def test_cap_absorbs_outgoing_packet(self) -> None:
        """Test an outgoing packet is absorbed on an excited channel but not on the ground."""

        grid = make_grid(0.0, 40.0, 1024)
        curves = flat_curves((0.0, 0.0, 0.0, 0.0), (0.0, 0.0, 0.0), domain=(0.0, 40.0))
        config = PropagationConfig(
            time_step=0.005, detector=20.0, cap_onset=30.0, cap_width=10.0, cap_strength=20.0
        )
        field = build_field(FieldSpec(0.0, 1.0, 10.0))
        propagator = SplitOperatorPropagator(curves, grid, field, config)

        packet = gaussian(grid, 15.0, 5.0, 1.0)
        state = WavepacketState(0.0, np.vstack([packet, packet, packet, packet]), grid)
        for _ in range(2000):
            state = propagator.step(state)

        norms = state.norms()
        self.assertAlmostEqual(norms[0], 1.0, places=10)
        for ch in (1, 2, 3):
            self.assertLess(norms[ch], 1e-4)

    def test_coherent_state_revival(self) -> None:
        """Test a displaced harmonic ground state returns after one period."""

        grid = make_grid(0.0, 40.0, 512)
        harmonic = lambda r: 0.5 * (np.asarray(r, dtype=float) - 20.0) ** 2
        curves = CurveSet(
            1.0,
            (harmonic, constant(50.0), constant(50.0), constant(50.0)),
            (constant(0.0), constant(0.0), constant(0.0)),
            (0.0, 40.0),
            check=False,
        )
        period = 2.0 * np.pi
        config = PropagationConfig(time_step=period / 1000, cap_strength=0.0)
        field = build_field(FieldSpec(0.0, 1.0, period))
        propagator = SplitOperatorPropagator(curves, grid, field, config)

        initial = np.zeros((4, grid.n), dtype=complex)
        initial[0] = gaussian(grid, 23.0, 0.0, np.sqrt(0.5))
        state = WavepacketState(0.0, initial, grid)
        for _ in range(1000):
            state = propagator.step(state)

        overlap = abs(np.vdot(initial[0], state.amplitudes[0]) * grid.spacing)
        self.assertGreater(overlap, 1.0 - 1e-6)

    def test_step_damps_like_apply_cap(self) -> None:
        """Test the absorbing potential in step() matches apply_cap() after an undamped step."""

        grid = make_grid(0.0, 40.0, 256)
        curves = flat_curves((0.0, 0.0, 0.0, 0.0), (0.0, 0.0, 0.0), domain=(0.0, 40.0))
        field = build_field(FieldSpec(0.0, 1.0, 1.0))
        packet = gaussian(grid, 32.0, 2.0, 1.0)
        state = WavepacketState(0.0, np.vstack([packet, packet, packet, packet]), grid)
        for cap_ground in (False, True):
            damped = PropagationConfig(
                time_step=0.01,
                detector=20.0,
                cap_onset=30.0,
                cap_width=10.0,
                cap_strength=2.0,
                cap_ground=cap_ground,
            )
            undamped = PropagationConfig(
                time_step=0.01, detector=20.0, cap_onset=30.0, cap_width=10.0, cap_strength=0.0
            )
            stepped = SplitOperatorPropagator(curves, grid, field, damped).step(state)
            free = SplitOperatorPropagator(curves, grid, field, undamped).step(state)
            expected = apply_cap(free, damped, 0.01)
            np.testing.assert_allclose(stepped.amplitudes, expected.amplitudes, rtol=1e-14)
            self.assertEqual(stepped.norms()[0] < free.norms()[0], cap_ground)


class TestPropagate(unittest.TestCase):
    """
    Unit tests for the propagate() function and PropagationResult class.
    """

    @classmethod
    def setUpClass(cls) -> None:
        cls.curves = surrogate_hi()
        cls.grid = make_grid(1.5, 10.0, 256)
        cls.v0 = eigensolve(cls.curves.potentials[0], cls.curves.mass, cls.grid, 1)[0]
        cls.omega = convert(4.0, "eV", "hartree")

    def test_unitarity(self) -> None:
        """Test the norm is conserved with the field on and no absorbing potential."""

        config = PropagationConfig(cap_strength=0.0, output_stride=20)
        duration = 200 * config.time_step
        field = build_field(FieldSpec(F0, self.omega, duration))
        result = propagate(self.v0, self.curves, field, config)
        self.assertEqual(len(result.times), 11)
        np.testing.assert_allclose(result.norms.sum(axis=1), 1.0, atol=1e-9)
        self.assertGreater(result.norms[-1, 1:].sum(), 0.0)

    def test_stationary_state(self) -> None:
        """Test a vibrational eigenstate is stationary without a field."""

        config = PropagationConfig()
        duration = 200 * config.time_step
        field = build_field(FieldSpec(0.0, self.omega, duration))
        result = propagate(self.v0, self.curves, field, config)
        psi = result.final_state.amplitudes
        overlap = abs(np.vdot(self.v0.chi, psi[0]) * self.grid.spacing) ** 2
        self.assertGreater(overlap, 1.0 - 1e-8)
        self.assertTrue(np.all(psi[1:] == 0.0))
        np.testing.assert_array_equal(result.integrated, 0.0)

    def test_zero_duration(self) -> None:
        """Test T = 0 gives a single sample and zero fluxes."""

        field = build_field(FieldSpec(F0, self.omega, 0.0))
        result = propagate(self.v0, self.curves, field, PropagationConfig())
        self.assertEqual(len(result.times), 1)
        self.assertEqual(result.record.final, {2: 0.0, 3: 0.0, 4: 0.0})
        frame = result.to_frame()
        self.assertEqual(
            list(frame.columns),
            [
                "t_fs",
                "norm1",
                "norm2",
                "norm3",
                "norm4",
                "J2",
                "J3",
                "J4",
                "inner_norm",
                "absorbed",
                "balance",
            ],
        )
        self.assertAlmostEqual(frame["norm1"].iloc[0], 1.0, places=12)
        self.assertAlmostEqual(frame["balance"].iloc[0], 1.0, places=6)

    def test_detector_error(self) -> None:
        """Test DetectorError when the absorbing potential does not fit on the grid."""

        config = PropagationConfig(cap_onset=9.5)
        with self.assertRaises(DetectorError):
            propagate(self.v0, self.curves, build_field(FieldSpec(F0, self.omega, 10.0)), config)

    def test_instability(self) -> None:
        """Test InstabilityError when the norm grows."""

        def growing(propagator, state):
            return WavepacketState(
                state.t + propagator.time_step, 1.1 * state.amplitudes, state.grid
            )

        config = PropagationConfig(output_stride=1)
        field = build_field(FieldSpec(F0, self.omega, 10 * config.time_step))
        with patch.object(SplitOperatorPropagator, "step", autospec=True, side_effect=growing):
            with self.assertRaises(InstabilityError) as ctx:
                propagate(self.v0, self.curves, field, config)
        self.assertEqual(ctx.exception.exit_code, 4)


if __name__ == "__main__":
    unittest.main()
