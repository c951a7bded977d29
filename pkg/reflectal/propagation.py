"""
The propagation module contains the four-channel wavepacket propagator: the continuous-wave laser
field with its switch-on envelope, a sixth-order symplectic split-operator scheme, the complex
absorbing potential at the grid edge, and the driver that records norms and detector fluxes.

Each composite step alternates kinetic factors exp(-i c_k K dt), applied channel by channel in
momentum space, with potential factors U exp(-i d_k Lambda dt) U^T, where U diagonalizes the
4 x 4 potential-coupling matrix at each grid point. The coefficients come from Yoshida's
symmetric composition of the second-order Strang step, and the potential factor k is evaluated
at t + (c_1 + ... + c_k) dt.

The docstring code examples assume that ``reflectal`` has been imported
as ``rf``:

.. highlight:: python
.. code-block:: python

    >>> import reflectal as rf

"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd

from reflectal.converters import FEMTOSECOND
from reflectal.curves import EXCITED_CHANNELS, CurveSet
from reflectal.flux import FluxRecord, accumulate_flux, instantaneous_flux, detector_index
from reflectal.grid import RadialGrid
from reflectal.utils import ConfigError, InstabilityError, DetectorError
from reflectal.vibrational import VibrationalState

logger = logging.getLogger(__name__)

N_CHANNELS = 4
RAMP_CYCLES = 10.0
MIN_RAMP_CYCLES = 5.0
NORM_GROWTH_LIMIT = 1.0e-6

COMPOSITION_WEIGHTS = {
    2: (1.0,),
    4: (
        1.0 / (2.0 - 2.0 ** (1.0 / 3.0)),
        -(2.0 ** (1.0 / 3.0)) / (2.0 - 2.0 ** (1.0 / 3.0)),
        1.0 / (2.0 - 2.0 ** (1.0 / 3.0)),
    ),
}
_W1, _W2, _W3 = -1.17767998417887, 0.235573213359357, 0.784513610477560
_W0 = 1.0 - 2.0 * (_W1 + _W2 + _W3)
COMPOSITION_WEIGHTS[6] = (_W3, _W2, _W1, _W0, _W1, _W2, _W3)


def split_coefficients(order: int = 6) -> tuple[np.ndarray, np.ndarray]:
    """
    Kinetic (c) and potential (d) coefficients of a symmetric split-operator composition.

    Parameters
    ----------
    order : int, optional
        2 (Strang), 4 (triple jump) or 6 (Yoshida). Default 6.

    Returns
    -------
    tuple
        ``(c, d)`` with ``len(c) == len(d) + 1``; both sum to 1.

    """

    if order not in COMPOSITION_WEIGHTS:
        raise ConfigError(f"Split-operator order must be one of 2, 4, 6, got {order}.")
    d = np.array(COMPOSITION_WEIGHTS[order])
    c = 0.5 * (np.concatenate(([0.0], d)) + np.concatenate((d, [0.0])))
    return c, d


@dataclass(frozen=True)
class FieldSpec:
    """
    Continuous-wave laser field F(t) = F0 cos(omega t) Theta(t).

    Parameters
    ----------
    amplitude : float
        Peak field F0 (a.u.).
    omega : float
        Photon energy (hartree).
    duration : float
        Total propagation time T (a.u.).
    ramp : float or None, optional
        Envelope switch-on time (a.u.). Defaults to 10 optical cycles.

    """

    amplitude: float
    omega: float
    duration: float
    ramp: Optional[float] = None

    def __post_init__(self) -> None:
        if self.amplitude < 0.0:
            raise ConfigError(f"Field amplitude must be non-negative, got {self.amplitude}.")
        if not self.omega > 0.0:
            raise ConfigError(f"Photon energy must be positive, got {self.omega}.")
        if self.duration < 0.0:
            raise ConfigError(f"Duration must be non-negative, got {self.duration}.")
        if self.ramp is not None and self.ramp < 0.0:
            raise ConfigError(f"Ramp duration must be non-negative, got {self.ramp}.")

    @property
    def period(self) -> float:
        """Optical period 2 pi / omega (a.u.)."""
        return 2.0 * np.pi / self.omega

    @property
    def ramp_duration(self) -> float:
        """Envelope switch-on time tau (a.u.)."""
        return RAMP_CYCLES * self.period if self.ramp is None else self.ramp


class LaserField:
    """
    Callable F(t) = F0 cos(omega t) Theta(t), with Theta(t) = sin^2(pi t / (2 tau)) for
    0 <= t < tau and 1 afterwards.

    """

    def __init__(self, spec: FieldSpec) -> None:
        self.spec = spec
        self.tau = spec.ramp_duration

    def envelope(self, t: float) -> float:
        """Switch-on envelope Theta(t)."""
        if t <= 0.0:
            return 0.0
        if t >= self.tau:
            return 1.0
        return float(np.sin(0.5 * np.pi * t / self.tau) ** 2)

    def __call__(self, t: float) -> float:
        if self.spec.amplitude == 0.0:
            return 0.0
        return self.spec.amplitude * float(np.cos(self.spec.omega * t)) * self.envelope(t)

    def __repr__(self) -> str:
        return f"LaserField({self.spec})"


def build_field(spec: FieldSpec) -> LaserField:
    """
    Laser field of a field specification.

    A ramp shorter than 5 optical cycles is reported with a warning; the field is built anyway.

    Examples
    --------
    >>> field = rf.build_field(rf.FieldSpec(0.005, 0.13, 1000.0))
    >>> field(0.0)
    0.0

    """

    cycles = spec.ramp_duration / spec.period
    if cycles < MIN_RAMP_CYCLES:
        logger.warning(
            "Envelope ramp of %.3g optical cycles is shorter than %.0f cycles; "
            "the switch-on may excite off-resonant transitions.",
            cycles,
            MIN_RAMP_CYCLES,
        )
    return LaserField(spec)


@dataclass(frozen=True)
class PropagationConfig:
    """
    Numerical parameters of a propagation (atomic units).

    Parameters
    ----------
    time_step : float, optional
        dt. Default 0.043 fs.
    detector : float, optional
        Flux detector position R_c (bohr). Default 6.
    output_stride : int, optional
        Steps between recorded samples. Default 50.
    cap_onset : float, optional
        Start of the absorbing potential (bohr). Default 9.
    cap_width : float, optional
        Width of the absorbing ramp (bohr). Default 1.
    cap_strength : float, optional
        Strength eta (hartree); 0 disables the absorbing potential. Default 0.15.
    cap_ground : bool, optional
        Also absorb on the ground channel. Default False.
    order : int, optional
        Order of the split-operator scheme, 2, 4 or 6. Default 6.

    """

    # pylint: disable=too-many-instance-attributes

    time_step: float = 0.043 * FEMTOSECOND
    detector: float = 6.0
    output_stride: int = 50
    cap_onset: float = 9.0
    cap_width: float = 1.0
    cap_strength: float = 0.15
    cap_ground: bool = False
    order: int = 6

    def __post_init__(self) -> None:
        if not self.time_step > 0.0:
            raise ConfigError(f"Time step must be positive, got {self.time_step}.")
        if self.output_stride < 1:
            raise ConfigError(f"Output stride must be at least 1, got {self.output_stride}.")
        if not self.cap_width > 0.0 or self.cap_strength < 0.0:
            raise ConfigError("CAP width must be positive and its strength non-negative.")
        if not self.detector < self.cap_onset:
            raise DetectorError(
                f"Detector R_c = {self.detector} bohr must lie before the CAP onset "
                f"{self.cap_onset} bohr."
            )
        split_coefficients(self.order)

    @property
    def cap_enabled(self) -> bool:
        """Whether the absorbing potential acts."""
        return self.cap_strength > 0.0

    def check_grid(self, grid: RadialGrid) -> None:
        """
        Check the detector and absorbing potential fit on ``grid``.

        Raises
        ------
        DetectorError
            If the CAP extends past R_max or the detector is within 2 points of the grid ends.

        """

        if self.cap_onset + self.cap_width > grid.r_max + 1.0e-9 * grid.spacing:
            raise DetectorError(
                f"CAP end {self.cap_onset + self.cap_width} bohr lies beyond R_max {grid.r_max}."
            )
        detector_index(grid, self.detector)


def cap_factor(grid: RadialGrid, config: PropagationConfig, time_step: float) -> np.ndarray:
    """exp(-eta ((R - R_cap) / width)^2 dt) for R >= R_cap, 1 elsewhere."""

    depth = np.clip((grid.points - config.cap_onset) / config.cap_width, 0.0, None)
    return np.exp(-config.cap_strength * depth**2 * time_step)


@dataclass(frozen=True)
class WavepacketState:
    """
    Amplitudes of the four channels on the shared radial grid at time ``t``.

    Parameters
    ----------
    t : float
        Time (a.u.).
    amplitudes : numpy.ndarray
        Complex array of shape (4, n).
    grid : RadialGrid
        The grid.

    """

    t: float
    amplitudes: np.ndarray = field(repr=False)
    grid: RadialGrid = field(repr=False)

    @classmethod
    def from_vibrational(cls, state: VibrationalState, t: float = 0.0) -> "WavepacketState":
        """Vibrational eigenstate on channel 1, other channels empty."""
        amplitudes = np.zeros((N_CHANNELS, state.grid.n), dtype=complex)
        amplitudes[0] = state.chi
        return cls(t, amplitudes, state.grid)

    def norms(self) -> np.ndarray:
        """<phi_i|phi_i> per channel."""
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1) * self.grid.spacing

    def norm(self) -> float:
        """Total norm."""
        return float(np.sum(self.norms()))

    def inner_norm(self, r_c: float) -> float:
        """Total norm at R < r_c, all channels."""
        mask = self.grid.points < r_c
        return float(np.sum(np.abs(self.amplitudes[:, mask]) ** 2) * self.grid.spacing)


def _damp(amplitudes: np.ndarray, factor: np.ndarray, config: PropagationConfig) -> np.ndarray:
    """Multiply the absorbed channels of ``amplitudes`` by ``factor`` in place."""

    first = 0 if config.cap_ground else 1
    amplitudes[first:] *= factor
    return amplitudes


def apply_cap(
    state: WavepacketState, config: PropagationConfig, time_step: float
) -> WavepacketState:
    """
    Damp the excited channels (and the ground channel if ``config.cap_ground``) by the absorbing
    potential over one time step.

    """

    if not config.cap_enabled:
        return state
    amplitudes = _damp(state.amplitudes.copy(), cap_factor(state.grid, config, time_step), config)
    return WavepacketState(state.t, amplitudes, state.grid)


class SplitOperatorPropagator:
    """
    Split-operator propagator for the four-channel Hamiltonian T + V(R, t), where
    V(R, t) has V_i(R) on the diagonal and -mu_1j(R) F(t) on the first row and column.

    Parameters
    ----------
    curves : CurveSet
        Potentials, dipoles and reduced mass.
    grid : RadialGrid
        Radial grid.
    field : LaserField
        Laser field F(t).
    config : PropagationConfig
        Numerical parameters.

    """

    def __init__(
        self,
        curves: CurveSet,
        grid: RadialGrid,
        field: LaserField,
        config: PropagationConfig,
    ) -> None:
        self.curves = curves
        self.grid = grid
        self.field = field
        self.config = config
        self.time_step = config.time_step
        self.c, self.d = split_coefficients(config.order)

        r = grid.points
        self._diagonal = np.stack([curves.potential(ch, r) for ch in range(1, 5)], axis=1)
        self._base = np.zeros((grid.n, N_CHANNELS, N_CHANNELS))
        self._coupling = np.zeros((grid.n, N_CHANNELS, N_CHANNELS))
        for ch in range(N_CHANNELS):
            self._base[:, ch, ch] = self._diagonal[:, ch]
        for ch in EXCITED_CHANNELS:
            self._coupling[:, 0, ch - 1] = -curves.dipole(ch, r)
            self._coupling[:, ch - 1, 0] = -curves.dipole(ch, r)

        kinetic = grid.momenta**2 / (2.0 * curves.mass)
        self._kinetic_phases = [np.exp(-1j * ck * self.time_step * kinetic) for ck in self.c]
        self._cap = cap_factor(grid, config, self.time_step) if config.cap_enabled else None

    def _kinetic(self, psi: np.ndarray, k: int) -> np.ndarray:
        return np.fft.ifft(self._kinetic_phases[k] * np.fft.fft(psi, axis=1), axis=1)

    def potential_factor(self, psi: np.ndarray, tau: float, field_value: float) -> np.ndarray:
        """Apply exp(-i V tau) at instantaneous field ``field_value`` to amplitudes (4, n)."""

        if field_value == 0.0:
            return psi * np.exp(-1j * tau * self._diagonal.T)
        energies, vectors = np.linalg.eigh(self._base + field_value * self._coupling)
        local = np.einsum("nji,jn->ni", vectors, psi)
        local *= np.exp(-1j * tau * energies)
        return np.einsum("nij,nj->in", vectors, local)

    def step(self, state: WavepacketState) -> WavepacketState:
        """
        Advance by one composite step (followed by the absorbing potential, if enabled).

        """

        psi = state.amplitudes
        t_sub = state.t
        for k, dk in enumerate(self.d):
            psi = self._kinetic(psi, k)
            t_sub += self.c[k] * self.time_step
            psi = self.potential_factor(psi, dk * self.time_step, self.field(t_sub))
        psi = self._kinetic(psi, len(self.c) - 1)
        if self._cap is not None:
            psi = _damp(psi, self._cap, self.config)
        return WavepacketState(state.t + self.time_step, psi, state.grid)


@dataclass
class PropagationResult:
    """
    Time series recorded at the output stride.

    Parameters
    ----------
    times : numpy.ndarray
        Sample times (a.u.).
    norms : numpy.ndarray
        Channel norms, shape (samples, 4).
    inner_norm : numpy.ndarray
        Total norm at R < R_c.
    flux : numpy.ndarray
        Instantaneous detector flux of channels 2-4, shape (samples, 3).
    record : FluxRecord
        Time-integrated fluxes.
    final_state : WavepacketState
        State at the end of the run.
    time_step : float
        dt used (a.u.).

    """

    times: np.ndarray
    norms: np.ndarray
    inner_norm: np.ndarray
    flux: np.ndarray
    record: FluxRecord
    final_state: WavepacketState = field(repr=False)
    time_step: float

    @property
    def integrated(self) -> np.ndarray:
        """J_2, J_3, J_4 at each sample."""
        return self.record.values

    @property
    def balance(self) -> np.ndarray:
        """Sum of J_i plus the norm remaining inside the detector, per sample."""
        return self.integrated.sum(axis=1) + self.inner_norm

    def to_frame(self) -> pd.DataFrame:
        """
        Columns ``t_fs, norm1..norm4, J2, J3, J4`` followed by the diagnostics
        ``inner_norm, absorbed, balance``.

        """

        frame = pd.DataFrame({"t_fs": self.times / FEMTOSECOND})
        for ch in range(N_CHANNELS):
            frame[f"norm{ch + 1}"] = self.norms[:, ch]
        for col, ch in enumerate(self.record.channels):
            frame[f"J{ch}"] = self.integrated[:, col]
        frame["inner_norm"] = self.inner_norm
        frame["absorbed"] = 1.0 - self.norms.sum(axis=1)
        frame["balance"] = self.balance
        return frame


def propagate(
    initial: VibrationalState,
    curves: CurveSet,
    field: LaserField,
    config: PropagationConfig,
) -> PropagationResult:
    """
    Propagate a ground state vibrational level under the laser field from t = 0 to the field's
    duration T.

    Parameters
    ----------
    initial : VibrationalState
        Initial state on channel 1; its grid is the propagation grid.
    curves : CurveSet
        Curves.
    field : LaserField
        Laser field; ``field.spec.duration`` sets T.
    config : PropagationConfig
        Numerical parameters.

    Returns
    -------
    PropagationResult
        Norms and fluxes every ``config.output_stride`` steps (and at T), and the final state.

    Raises
    ------
    DetectorError
        If the detector or absorbing potential does not fit on the grid.
    InstabilityError
        If the total norm exceeds 1 + 1e-6.

    """

    grid = initial.grid
    config.check_grid(grid)
    propagator = SplitOperatorPropagator(curves, grid, field, config)
    dt = config.time_step
    n_steps = int(round(field.spec.duration / dt))
    logger.info(
        "Propagating v=%d: %d steps of %.4g fs, omega = %.6g Ha, F0 = %.4g a.u.",
        initial.v,
        n_steps,
        dt / FEMTOSECOND,
        field.spec.omega,
        field.spec.amplitude,
    )

    state = WavepacketState.from_vibrational(initial)
    record = FluxRecord(config.detector)
    times, norms, inner, fluxes = [], [], [], []

    def sample(current: WavepacketState, dt_output: float) -> None:
        channel_norms = current.norms()
        total = float(np.sum(channel_norms))
        if total > 1.0 + NORM_GROWTH_LIMIT:
            raise InstabilityError(dt, total, current.t)
        flux = instantaneous_flux(current.amplitudes[1:], config.detector, curves.mass, grid)
        accumulate_flux(record, flux, dt_output)
        times.append(current.t)
        norms.append(channel_norms)
        inner.append(current.inner_norm(config.detector))
        fluxes.append(flux)

    sample(state, 0.0)
    last_sample = 0
    report = max(n_steps // 10, 1)
    for step in range(1, n_steps + 1):
        state = propagator.step(state)
        if step % config.output_stride == 0 or step == n_steps:
            sample(state, (step - last_sample) * dt)
            last_sample = step
        if step % report == 0:
            logger.debug("Step %d/%d, norm %.10f", step, n_steps, state.norm())

    result = PropagationResult(
        times=np.array(times),
        norms=np.array(norms),
        inner_norm=np.array(inner),
        flux=np.array(fluxes),
        record=record,
        final_state=state,
        time_step=dt,
    )
    logger.info("Final J (channels 2, 3, 4): %s", record.final)
    return result
