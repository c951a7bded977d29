"""
The grid module contains the uniform radial grid shared by the eigensolver, the wavepacket
propagator and the flux detector.

The docstring code examples assume that ``reflectal`` has been imported
as ``rf``:

.. highlight:: python
.. code-block:: python

    >>> import reflectal as rf

"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from reflectal.utils import GridError


@dataclass(frozen=True)
class RadialGrid:
    """
    Uniform grid of ``n`` points on [``r_min``, ``r_max``] (bohr), both ends included.

    Parameters
    ----------
    r_min : float
        First grid point (bohr).
    r_max : float
        Last grid point (bohr).
    n : int
        Number of points, a power of two and at least 8.

    """

    r_min: float
    r_max: float
    n: int

    def __post_init__(self) -> None:
        if not self.r_max > self.r_min:
            raise GridError(f"r_max ({self.r_max}) must exceed r_min ({self.r_min}).")
        if self.n < 8:
            raise GridError(f"Grid needs at least 8 points, got {self.n}.")
        if self.n & (self.n - 1):
            raise GridError(f"Number of grid points must be a power of two, got {self.n}.")

    @property
    def spacing(self) -> float:
        """Grid spacing dR (bohr)."""
        return (self.r_max - self.r_min) / (self.n - 1)

    @cached_property
    def points(self) -> np.ndarray:
        """Read-only array of grid positions (bohr)."""
        r = self.r_min + self.spacing * np.arange(self.n)
        r.setflags(write=False)
        return r

    @cached_property
    def momenta(self) -> np.ndarray:
        """
        Read-only array of conjugate momenta k_j (1/bohr) in FFT order.

        The grid is treated as periodic with period ``n * spacing``; the largest magnitude is the
        Nyquist momentum pi/dR, which appears once (as -pi/dR).

        """

        k = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.spacing)
        k.setflags(write=False)
        return k

    @property
    def k_max(self) -> float:
        """Nyquist momentum pi/dR (1/bohr)."""
        return np.pi / self.spacing

    def index_of(self, r: float) -> int:
        """Index of the grid point closest to ``r``."""
        return int(round((r - self.r_min) / self.spacing))

    def integrate(self, values: np.ndarray) -> float:
        """Riemann sum of ``values`` with the dR measure."""
        return float(np.sum(values) * self.spacing)

    def __repr__(self) -> str:
        return f"RadialGrid(r_min={self.r_min}, r_max={self.r_max}, n={self.n})"


def make_grid(r_min: float, r_max: float, n: int) -> RadialGrid:
    """
    Create a uniform radial grid.

    Parameters
    ----------
    r_min : float
        First grid point (bohr).
    r_max : float
        Last grid point (bohr).
    n : int
        Number of points, a power of two and at least 8.

    Returns
    -------
    RadialGrid
        The grid.

    Raises
    ------
    GridError
        If ``r_max <= r_min``, ``n < 8`` or ``n`` is not a power of two.

    Examples
    --------
    >>> grid = rf.make_grid(0.5, 10.0, 2048)
    >>> round(grid.spacing, 7)
    0.0046409

    """

    return RadialGrid(float(r_min), float(r_max), int(n))
