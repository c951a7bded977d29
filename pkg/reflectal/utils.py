"""
The utils module contains the exception classes raised by ``reflectal`` and a few small numerical
helpers shared between modules.

Every exception derives from ``ReflectalError`` and from the closest builtin exception, so callers
can catch either. Each class carries the ``exit_code`` the command line front end returns when the
error terminates a run: 2 for a failed precondition, 3 for an empty or degenerate result, 4 for a
numerical instability.

The docstring code examples assume that ``reflectal`` has been imported
as ``rf``:

.. highlight:: python
.. code-block:: python

    >>> import reflectal as rf

"""

from typing import Callable, Optional

import numpy as np


class ReflectalError(Exception):
    """
    Base class for all errors raised by ``reflectal``.

    Class Attributes
    ----------
    exit_code : int
        Process exit code used by the command line interface.

    """

    exit_code = 2


class UnitError(ReflectalError, ValueError):
    """
    Exception for unknown units or conversions between units of different dimensions.

    Parameters
    ----------
    units_from : str
        Unit converted from.
    units_to : str
        Unit converted to.
    additional_message : str
        Message with additional error context.

    """

    def __init__(self, units_from: str, units_to: str, additional_message: str, *args) -> None:
        super().__init__(*args)
        self.units_from = units_from
        self.units_to = units_to
        self.additional_message = additional_message

    def __str__(self) -> str:
        return f"Cannot convert {self.units_from} to {self.units_to}: {self.additional_message}"


class GridError(ReflectalError, ValueError):
    """Invalid radial grid bounds or point count."""


class CurveTableError(ReflectalError, ValueError):
    """
    Exception for malformed curve table files.

    Parameters
    ----------
    source : str
        File name or description of the table.
    message : str
        What is wrong with the table.
    line : int or None, optional
        1-based line number of the offending line, if known.

    """

    def __init__(self, source: str, message: str, line: Optional[int] = None, *args) -> None:
        super().__init__(*args)
        self.source = source
        self.message = message
        self.line = line

    def __str__(self) -> str:
        where = f"{self.source}, line {self.line}" if self.line is not None else self.source
        return f"{where}: {self.message}"


class CurveSetError(ReflectalError, ValueError):
    """Inconsistent curve set or surrogate parameters."""


class TopologyNotFoundError(ReflectalError, ValueError):
    """No nonadiabatic tunneling type crossing found in a dressed pair."""

    exit_code = 3


class DegenerateGeometryError(ReflectalError, ValueError):
    """Crossing geometry for which the Zhu-Nakamura parameters are undefined."""

    exit_code = 3


class ZnDomainError(ReflectalError, ValueError):
    """Energy outside the domain of the Zhu-Nakamura formulas."""

    exit_code = 3


class EmptyWindowError(ReflectalError, ValueError):
    """A frequency window without a single valid manifold sample."""

    exit_code = 3


class AlignmentError(ReflectalError, ValueError):
    """No channel 4 shape parameter in the searched range puts a root on a channel 2 root."""

    exit_code = 3


class ResolutionError(ReflectalError, ValueError):
    """Radial grid cannot hold the requested vibrational states."""


class DetectorError(ReflectalError, ValueError):
    """Flux detector or absorbing potential placed outside the usable part of the grid."""


class ConfigError(ReflectalError, ValueError):
    """Invalid run configuration."""


class InstabilityError(ReflectalError, ArithmeticError):
    """
    Exception raised when the wavepacket norm grows during propagation.

    Parameters
    ----------
    time_step : float
        Time step of the failing run (a.u. time).
    norm : float
        Total norm observed.
    time : float
        Propagation time at which the growth was detected (a.u. time).

    """

    exit_code = 4

    def __init__(self, time_step: float, norm: float, time: float, *args) -> None:
        super().__init__(*args)
        self.time_step = time_step
        self.norm = norm
        self.time = time

    def __str__(self) -> str:
        return (
            f"Norm grew to {self.norm:.12g} at t = {self.time:.6g} a.u. with time step "
            f"dt = {self.time_step:.6g} a.u.; reduce dt."
        )


def sign_changes(values: np.ndarray) -> np.ndarray:
    """
    Indices ``j`` where ``values[j]`` and ``values[j+1]`` have strictly opposite signs or
    ``values[j]`` is zero and ``values[j+1]`` is not.

    Parameters
    ----------
    values : numpy.ndarray
        One-dimensional array of samples.

    Returns
    -------
    numpy.ndarray
        Integer indices of the left end of every bracketing interval.

    """

    signs = np.sign(values)
    return np.nonzero((signs[:-1] * signs[1:] < 0) | ((signs[:-1] == 0) & (signs[1:] != 0)))[0]


def expand_bracket(
    func: Callable[[float], float],
    start: float,
    step: float,
    limit: float,
) -> tuple[float, float]:
    """
    March from ``start`` in the direction of ``step`` (doubling the step each time) until ``func``
    changes sign, and return the last point before and the first point after the change.

    Parameters
    ----------
    func : Callable
        Scalar function, assumed negative at ``start``.
    start : float
        Starting point.
    step : float
        Initial signed step.
    limit : float
        Point not to pass. Returned if no sign change is found before it.

    Returns
    -------
    tuple
        ``(inside, outside)`` with ``func(inside) < 0 <= func(outside)``. If the limit is reached
        first, ``outside`` is ``limit`` and ``func(limit)`` may still be negative.

    """

    x = start
    while True:
        x_next = x + step
        if (step > 0 and x_next >= limit) or (step < 0 and x_next <= limit):
            return x, limit
        if func(x_next) >= 0.0:
            return x, x_next
        x = x_next
        step *= 2.0
