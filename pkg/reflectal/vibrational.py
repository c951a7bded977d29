"""
The vibrational module contains the bound-state eigensolver for the field-free electronic ground
state. Its eigenstates are the initial wavepackets of the propagation, and their energies E_v
enter the complete reflection manifolds.

The Hamiltonian is set up on the propagation grid with the Fourier grid method: the kinetic
energy matrix is the periodic (circulant) matrix whose eigenvalues are k^2 / 2m on the grid's
momentum set, the potential is diagonal. Eigenstates are therefore stationary under the
propagator's kinetic operator.

The docstring code examples assume that ``reflectal`` has been imported
as ``rf``:

.. highlight:: python
.. code-block:: python

    >>> import reflectal as rf

"""

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import pandas as pd
from scipy.linalg import circulant, eigh

from reflectal.converters import EV
from reflectal.grid import RadialGrid
from reflectal.utils import ResolutionError, sign_changes

logger = logging.getLogger(__name__)

BOUNDARY_AMPLITUDE = 1.0e-6


@dataclass(frozen=True)
class VibrationalState:
    """
    Vibrational eigenstate of the ground electronic state.

    Parameters
    ----------
    v : int
        Vibrational quantum number.
    energy : float
        Eigenvalue E_v (hartree).
    chi : numpy.ndarray
        Real amplitude on the grid, normalized so that sum(chi^2) dR = 1.
    grid : RadialGrid
        Grid ``chi`` is given on.
    potential : numpy.ndarray
        Potential on the grid (hartree), used for the node count.

    """

    v: int
    energy: float
    chi: np.ndarray = field(repr=False)
    grid: RadialGrid = field(repr=False)
    potential: np.ndarray = field(repr=False, compare=False)

    @property
    def norm(self) -> float:
        """<chi|chi> with the dR measure."""
        return self.grid.integrate(self.chi**2)

    @property
    def nodes(self) -> int:
        """Sign changes of chi inside the classically allowed region V(R) <= E_v."""
        allowed = np.nonzero(self.potential <= self.energy)[0]
        if allowed.size == 0:
            return 0
        inner = self.chi[allowed[0] : allowed[-1] + 1]
        return int(sign_changes(inner).size)

    def overlap(self, other: "VibrationalState") -> float:
        """<chi_v|chi_w> with the dR measure."""
        return self.grid.integrate(self.chi * other.chi)

    def to_frame(self) -> pd.DataFrame:
        """Columns ``R, chi_v(R)``."""
        return pd.DataFrame({"R": self.grid.points, f"chi_{self.v}(R)": self.chi})


def kinetic_matrix(grid: RadialGrid, mass: float) -> np.ndarray:
    """
    Periodic Fourier grid kinetic energy matrix (hartree).

    Its eigenvectors are the plane waves exp(i k_j R) with eigenvalues k_j^2 / 2m.

    """

    column = np.fft.ifft(grid.momenta**2 / (2.0 * mass)).real
    return circulant(column)


def eigensolve(
    potential: Callable,
    mass: float,
    grid: RadialGrid,
    n_states: int,
) -> list[VibrationalState]:
    """
    Lowest vibrational eigenstates of a one-dimensional potential.

    Parameters
    ----------
    potential : Callable
        V(R) in hartree, vectorized over numpy arrays.
    mass : float
        Reduced mass (a.u.).
    grid : RadialGrid
        Radial grid.
    n_states : int
        Number of states to return.

    Returns
    -------
    list
        ``VibrationalState`` entries for v = 0 .. n_states - 1, energies ascending. Each chi is
        normalized with the dR measure and its first lobe is positive.

    Raises
    ------
    ResolutionError
        If ``n_states`` < 1, a state reaches the grid boundary (|chi| > 1e-6 at either end), or
        a state is not bound on the grid (E_v at or above the potential at either end).

    Examples
    --------
    >>> grid = rf.make_grid(-10.0, 10.0, 256)
    >>> levels = rf.eigensolve(lambda r: 0.5 * r**2, 1.0, grid, 3)
    >>> [round(s.energy, 9) for s in levels]
    [0.5, 1.5, 2.5]

    """

    if n_states < 1:
        raise ResolutionError(f"n_states must be at least 1, got {n_states}.")
    if n_states > grid.n:
        raise ResolutionError(f"Cannot resolve {n_states} states on {grid.n} grid points.")

    r = grid.points
    v_grid = np.asarray(potential(r), dtype=float)
    hamiltonian = kinetic_matrix(grid, mass) + np.diag(v_grid)
    energies, vectors = eigh(hamiltonian, subset_by_index=[0, n_states - 1])

    edge = min(v_grid[0], v_grid[-1])
    states = []
    for v in range(n_states):
        chi = vectors[:, v] / np.sqrt(grid.spacing)
        if energies[v] >= edge:
            raise ResolutionError(
                f"State v={v} (E = {energies[v]:.10g} Ha) is not bound below the potential at the "
                f"grid boundary ({edge:.10g} Ha); the grid holds fewer than {n_states} bound levels."
            )
        boundary = max(abs(chi[0]), abs(chi[-1]))
        if boundary > BOUNDARY_AMPLITUDE:
            raise ResolutionError(
                f"State v={v} has amplitude {boundary:.3g} at the grid boundary; extend the grid."
            )
        lobe = np.nonzero(np.abs(chi) > 0.01 * np.max(np.abs(chi)))[0][0]
        if chi[lobe] < 0.0:
            chi = -chi
        chi.setflags(write=False)
        states.append(VibrationalState(v, float(energies[v]), chi, grid, v_grid))

    logger.info(
        "Vibrational levels (eV): %s", ", ".join(f"{s.energy / EV:.6f}" for s in states)
    )
    return states
