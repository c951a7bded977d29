"""
The flux module contains the observables of a propagation: the probability current through an
asymptotic detector point, its time integral per dissociation channel, and the I / I* branching.

The docstring code examples assume that ``reflectal`` has been imported
as ``rf``, and NumPy as ``np``:

.. highlight:: python
.. code-block:: python

    >>> import numpy as np
    >>> import reflectal as rf

"""

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Union

import numpy as np

from reflectal.curves import CHANNEL_ASYMPTOTES, EXCITED_CHANNELS
from reflectal.grid import RadialGrid
from reflectal.utils import DetectorError

BRANCHING_FLOOR = 1.0e-12


def detector_index(grid: RadialGrid, r_c: float) -> int:
    """
    Index of the grid point nearest ``r_c``.

    Raises
    ------
    DetectorError
        If that point is less than 2 points from either end of the grid.

    """

    j = grid.index_of(r_c)
    if j < 2 or j > grid.n - 3:
        raise DetectorError(
            f"Detector R_c = {r_c} bohr must lie at least 2 points inside the grid "
            f"[{grid.r_min}, {grid.r_max}]."
        )
    return j


def instantaneous_flux(
    amplitude: np.ndarray, r_c: float, mass: float, grid: RadialGrid
) -> Union[float, np.ndarray]:
    """
    Probability current (1/m) Im(phi* dphi/dR) at the detector point.

    The derivative uses the five-point central stencil
    (-f[j+2] + 8 f[j+1] - 8 f[j-1] + f[j-2]) / (12 dR).

    Parameters
    ----------
    amplitude : numpy.ndarray
        Channel amplitude on the grid, shape (n,), or several channels, shape (channels, n).
    r_c : float
        Detector position (bohr); the nearest grid point is used.
    mass : float
        Reduced mass (a.u.).
    grid : RadialGrid
        Grid of ``amplitude``.

    Returns
    -------
    float or numpy.ndarray
        Flux (1/a.u. time), one value per channel.

    Raises
    ------
    DetectorError
        If the detector is within 2 points of either end of the grid.

    Examples
    --------
    >>> grid = rf.make_grid(0.0, 10.0, 1024)
    >>> phi = np.exp(0.5j * grid.points)
    >>> round(rf.instantaneous_flux(phi, 5.0, 2.0, grid), 8)
    0.25

    """

    j = detector_index(grid, r_c)
    f = np.asarray(amplitude)[..., j - 2 : j + 3]
    derivative = (-f[..., 4] + 8.0 * f[..., 3] - 8.0 * f[..., 1] + f[..., 0]) / (
        12.0 * grid.spacing
    )
    flux = np.imag(np.conj(f[..., 2]) * derivative) / mass
    return float(flux) if np.ndim(flux) == 0 else flux


@dataclass
class FluxRecord:
    """
    Time-integrated fluxes J_i(t) through the detector, one column per channel.

    Parameters
    ----------
    detector : float
        Detector position R_c (bohr).
    channels : tuple, optional
        Channel indices of the columns. Default (2, 3, 4).
    t0 : float, optional
        Time of the first sample (a.u.). Default 0.
    times : list
        Sample times (a.u.).
    integrated : list
        J_i at each sample time.
    last_flux : numpy.ndarray or None
        Instantaneous flux at the latest sample.

    """

    detector: float
    channels: tuple[int, ...] = EXCITED_CHANNELS
    t0: float = 0.0
    times: list[float] = field(default_factory=list)
    integrated: list[np.ndarray] = field(default_factory=list)
    last_flux: Optional[np.ndarray] = None

    @property
    def values(self) -> np.ndarray:
        """J_i(t) as an array of shape (samples, channels)."""
        if not self.integrated:
            return np.zeros((0, len(self.channels)))
        return np.vstack(self.integrated)

    @property
    def final(self) -> dict[int, float]:
        """J_i at the last sample, keyed by channel."""
        last = self.integrated[-1] if self.integrated else np.zeros(len(self.channels))
        return {ch: float(j) for ch, j in zip(self.channels, last)}


def accumulate_flux(
    record: FluxRecord, flux: np.ndarray, dt_output: float
) -> FluxRecord:
    """
    Add one sample of instantaneous flux to a record by the trapezoidal rule.

    The first sample of an empty record only sets the starting flux (J = 0 at ``record.t0``).

    Parameters
    ----------
    record : FluxRecord
        Record to update in place.
    flux : numpy.ndarray
        Instantaneous flux per channel.
    dt_output : float
        Time since the previous sample (a.u.).

    Returns
    -------
    FluxRecord
        The updated record.

    """

    flux = np.atleast_1d(np.asarray(flux, dtype=float))
    if record.last_flux is None:
        record.times.append(record.t0)
        record.integrated.append(np.zeros(len(record.channels)))
    else:
        record.times.append(record.times[-1] + dt_output)
        record.integrated.append(
            record.integrated[-1] + 0.5 * dt_output * (record.last_flux + flux)
        )
    record.last_flux = flux
    return record


class Branching(NamedTuple):
    """Dissociation probabilities into H + I and H + I*, and their ratio."""

    p_i: float
    p_istar: float
    ratio: float


def branching(
    record: FluxRecord, asymptotes: Optional[dict[int, str]] = None
) -> Branching:
    """
    Branching between I(2P3/2) and I*(2P1/2) from the final time-integrated fluxes.

    P_I sums the channels dissociating to I (2 and 4 by default), P_I* the channels dissociating
    to I* (channel 3). The ratio P_I* / P_I is ``inf`` when P_I < 1e-12, and ``nan`` when both
    are below 1e-12.

    Examples
    --------
    >>> record = rf.FluxRecord(6.0)
    >>> record.integrated.append(np.array([0.1, 0.1, 0.1]))
    >>> rf.branching(record).ratio
    0.5

    """

    asymptotes = CHANNEL_ASYMPTOTES if asymptotes is None else asymptotes
    final = record.final
    p_i = sum(j for ch, j in final.items() if asymptotes[ch] == "I")
    p_istar = sum(j for ch, j in final.items() if asymptotes[ch] == "I*")
    if p_i < BRANCHING_FLOOR:
        ratio = np.inf if p_istar >= BRANCHING_FLOOR else np.nan
    else:
        ratio = p_istar / p_i
    return Branching(float(p_i), float(p_istar), float(ratio))
