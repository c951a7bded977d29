"""
The converters module contains the physical constants and unit conversions used by ``reflectal``.

All internal computation is in Hartree atomic units (hbar = m_e = e = 1). Values entering from
configuration files or tables are converted here, and values leaving through output files are
converted back.

The docstring code examples assume that ``reflectal`` has been imported
as ``rf``:

.. highlight:: python
.. code-block:: python

    >>> import reflectal as rf

"""

import math

from reflectal.utils import UnitError

EV = 3.674932e-2
WAVENUMBER = 4.556335e-6
BOHR_ANGSTROM = 0.529177210903
FEMTOSECOND = 41.34137
AMU = 1822.888
FIELD_AU_V_PER_M = 5.142207e11
VACUUM_PERMITTIVITY = 8.8541878128e-12
SPEED_OF_LIGHT = 299792458.0
DEBYE = 0.3934303

# I = eps0 c F^2 / 2 at F = 1 a.u., in W/cm2
INTENSITY_AU_W_PER_CM2 = (
    0.5 * VACUUM_PERMITTIVITY * SPEED_OF_LIGHT * FIELD_AU_V_PER_M**2 / 1.0e4
)


class UnitConverter:
    """
    Unit converter between the units of the dimensions ``reflectal`` deals with.

    Each dictionary maps a unit name to the number of atomic units in one of that unit.

    Class Attributes
    ----------
    energy_units : dict
        Hartree per energy unit.
    length_units : dict
        Bohr per length unit.
    time_units : dict
        Atomic units of time per time unit.
    mass_units : dict
        Electron masses per mass unit.
    field_units : dict
        Atomic units of field per electric field unit.
    intensity_units : dict
        Atomic units of intensity per intensity unit.
    dipole_units : dict
        Atomic units of dipole (e a0) per dipole moment unit.
    dimensions : dict
        Dictionary of dimension name to the unit dictionary for that dimension.

    """

    energy_units: dict[str, float] = {
        "hartree": 1.0,
        "Ha": 1.0,
        "eV": EV,
        "cm-1": WAVENUMBER,
    }
    length_units: dict[str, float] = {
        "bohr": 1.0,
        "angstrom": 1.0 / BOHR_ANGSTROM,
        "Å": 1.0 / BOHR_ANGSTROM,
    }
    time_units: dict[str, float] = {
        "au_time": 1.0,
        "fs": FEMTOSECOND,
        "ps": 1.0e3 * FEMTOSECOND,
    }
    mass_units: dict[str, float] = {
        "me": 1.0,
        "amu": AMU,
    }
    field_units: dict[str, float] = {
        "au_field": 1.0,
        "V/m": 1.0 / FIELD_AU_V_PER_M,
    }
    intensity_units: dict[str, float] = {
        "au_intensity": 1.0,
        "W/cm2": 1.0 / INTENSITY_AU_W_PER_CM2,
        "GW/cm2": 1.0e9 / INTENSITY_AU_W_PER_CM2,
        "TW/cm2": 1.0e12 / INTENSITY_AU_W_PER_CM2,
    }
    dipole_units: dict[str, float] = {
        "au_dipole": 1.0,
        "debye": DEBYE,
    }
    dimensions: dict[str, dict[str, float]] = {
        "energy": energy_units,
        "length": length_units,
        "time": time_units,
        "mass": mass_units,
        "field": field_units,
        "intensity": intensity_units,
        "dipole": dipole_units,
    }

    unit_err_msg = (
        'is not a valid unit, e.g. "hartree", "eV", "cm-1", "bohr", "angstrom", "fs", "amu", '
        '"V/m" or "TW/cm2".'
    )

    @classmethod
    def dimension(cls, unit: str) -> str:
        """
        Name of the dimension a unit belongs to.

        Raises
        ------
        UnitError
            If the unit is unknown.

        """

        for name, units in cls.dimensions.items():
            if unit in units:
                return name
        raise UnitError(unit, "?", f"{unit} {cls.unit_err_msg}")

    @classmethod
    def to_atomic(cls, value: float, unit: str) -> float:
        """Express ``value`` given in ``unit`` in atomic units."""

        return value * cls.dimensions[cls.dimension(unit)][unit]

    @classmethod
    def from_atomic(cls, value: float, unit: str) -> float:
        """Express ``value`` given in atomic units in ``unit``."""

        return value / cls.dimensions[cls.dimension(unit)][unit]

    @classmethod
    def unit_conv(cls, value: float, units_from: str, units_to: str) -> float:
        """
        Converts a value between two units.

        Conversions between intensity and field units follow I = eps0 c F^2 / 2, in which case
        ``value`` must be non-negative.

        Parameters
        ----------
        value : float
            Value before conversion.
        units_from : str
            Unit before conversion.
        units_to : str
            Unit after conversion.

        Returns
        -------
        float
            Value in the new unit.

        Raises
        ------
        UnitError
            If either unit is unknown, or the units belong to different dimensions (other than
            the intensity/field pair).

        """

        for unit in (units_from, units_to):
            if not any(unit in units for units in cls.dimensions.values()):
                raise UnitError(units_from, units_to, f"{unit} {cls.unit_err_msg}")

        dim_from = cls.dimension(units_from)
        dim_to = cls.dimension(units_to)
        if dim_from == dim_to:
            factors = cls.dimensions[dim_from]
            if units_from == units_to:
                return value
            return value * factors[units_from] / factors[units_to]

        if {dim_from, dim_to} == {"field", "intensity"}:
            if value < 0.0:
                raise UnitError(units_from, units_to, "field and intensity must be >= 0.")
            atomic = cls.to_atomic(value, units_from)
            converted = atomic**2 if dim_from == "field" else math.sqrt(atomic)
            return cls.from_atomic(converted, units_to)

        raise UnitError(
            units_from,
            units_to,
            f"{units_from} is a unit of {dim_from} but {units_to} is a unit of {dim_to}.",
        )


def convert(value: float, units_from: str, units_to: str) -> float:
    """
    Convert a value from one unit to another.

    Parameters
    ----------
    value : float
        Value before conversion.
    units_from : str
        Unit before conversion.
    units_to : str
        Unit after conversion.

    Returns
    -------
    float
        Value expressed in ``units_to``.

    Raises
    ------
    UnitError
        If the units are unknown or of different dimensions.

    Examples
    --------
    >>> round(rf.convert(4.1, "eV", "hartree"), 9)
    0.150672212
    >>> round(rf.convert(1.0, "TW/cm2", "V/m") / 1e9, 3)
    2.745

    """

    return UnitConverter.unit_conv(value, units_from, units_to)


def field_from_intensity(intensity: float, unit: str = "W/cm2") -> float:
    """Peak field amplitude (a.u.) of a laser of the given cycle-averaged intensity."""

    return convert(intensity, unit, "au_field")


def intensity_from_field(field: float, unit: str = "au_field") -> float:
    """Intensity (W/cm2) of a laser of the given peak field amplitude."""

    return convert(field, unit, "W/cm2")
