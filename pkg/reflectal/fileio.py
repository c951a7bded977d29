"""
The fileio module contains functions to read tabulated potential energy and dipole curves, and to
write the CSV output files of the command line workflows.

Curve table files are plain text. Lines starting with ``#`` are comments, apart from the required
units directive ``# units: <length unit> <value unit>``. Each data row holds a radial position and a
value separated by whitespace, e.g.

.. code-block:: text

    # units: angstrom cm-1
    1.0   21400.5
    1.1   12003.2
    1.2    5320.0
    ...

Output files are comma separated with ``.`` decimals. Every output starts with ``#`` comment lines
holding the resolved run configuration as JSON, followed by any file-specific comments.

The docstring code examples assume that ``reflectal`` has been imported
as ``rf``:

.. highlight:: python
.. code-block:: python

    >>> import reflectal as rf

"""

import json
import os
import pathlib
from dataclasses import dataclass
from typing import Any, Iterable, Optional, Union

import numpy as np
import pandas as pd

from reflectal.converters import UnitConverter
from reflectal.utils import CurveTableError, UnitError

UNITS_DIRECTIVE = "units:"


def _read_table_file(filepath: Union[str, pathlib.Path], encoding: str) -> list[str]:
    """Read a text file. All file read side-effect is here to assist testing load_table() with mock."""

    with open(filepath, "r", encoding=encoding) as file:
        lines = file.read().splitlines()

    return lines


@dataclass(frozen=True)
class CurveTable:
    """
    Samples of one curve on a strictly increasing radial grid, in atomic units.

    Parameters
    ----------
    r : numpy.ndarray
        Radial positions (bohr), strictly increasing.
    values : numpy.ndarray
        Curve values, converted to ``value_unit``.
    value_unit : str
        Unit of ``values`` (normally ``hartree`` or ``au_dipole``).
    source_units : tuple
        Length and value units declared by the source file.
    source : str
        Where the table came from.

    """

    r: np.ndarray
    values: np.ndarray
    value_unit: str = "hartree"
    source_units: tuple[str, str] = ("bohr", "hartree")
    source: str = "<table>"

    def __post_init__(self) -> None:
        if self.r.shape != self.values.shape or self.r.ndim != 1:
            raise CurveTableError(self.source, "R and value columns differ in length.")
        if len(self.r) < 4:
            raise CurveTableError(
                self.source, f"at least 4 rows are needed for a cubic spline, got {len(self.r)}."
            )
        if np.any(np.diff(self.r) <= 0.0):
            raise CurveTableError(self.source, "R values must be strictly increasing.")

    def __len__(self) -> int:
        return len(self.r)


def _parse_units_directive(line: str, source: str, line_no: int) -> tuple[str, str]:
    """Parse ``# units: <length> <value>``."""

    body = line.lstrip("#").strip()[len(UNITS_DIRECTIVE) :].split()
    if len(body) != 2:
        raise CurveTableError(
            source, "units directive must read '# units: <length> <value>'.", line_no
        )
    length_unit, value_unit = body
    try:
        if UnitConverter.dimension(length_unit) != "length":
            raise CurveTableError(source, f"{length_unit} is not a length unit.", line_no)
        UnitConverter.dimension(value_unit)
    except UnitError as err:
        raise CurveTableError(source, str(err), line_no) from err
    return length_unit, value_unit


def parse_table(
    lines: Iterable[str], value_unit: str = "hartree", source: str = "<table>"
) -> CurveTable:
    """
    Parse the lines of a curve table file.

    See ``load_table()`` for the format and the errors raised.

    """

    units: Optional[tuple[str, str]] = None
    rows: list[tuple[float, float]] = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.lstrip("#").strip().startswith(UNITS_DIRECTIVE):
                units = _parse_units_directive(line, source, line_no)
            continue
        fields = line.split()
        if len(fields) != 2:
            raise CurveTableError(
                source, f"expected 2 columns (R value), found {len(fields)}.", line_no
            )
        try:
            rows.append((float(fields[0]), float(fields[1])))
        except ValueError as err:
            raise CurveTableError(source, f"cannot parse number: {err}.", line_no) from err

    if units is None:
        raise CurveTableError(source, "missing '# units: <length> <value>' directive.")

    data = np.array(rows, dtype=float).reshape(-1, 2)
    r, values = data[:, 0], data[:, 1]
    if len(r) > 1 and np.all(np.diff(r) < 0.0):
        r, values = r[::-1], values[::-1]
    if np.any(np.diff(r) <= 0.0):
        raise CurveTableError(source, "R values are not strictly monotone.")

    length_unit, file_value_unit = units
    try:
        r = r * UnitConverter.to_atomic(1.0, length_unit)
        values = values * UnitConverter.unit_conv(1.0, file_value_unit, value_unit)
    except UnitError as err:
        raise CurveTableError(source, str(err)) from err

    return CurveTable(
        r=r,
        values=values,
        value_unit=value_unit,
        source_units=units,
        source=source,
    )


def load_table(
    filepath: Union[str, pathlib.Path],
    value_unit: str = "hartree",
    encoding: str = "utf-8",
) -> CurveTable:
    """
    Read a curve table file.

    Parameters
    ----------
    filepath : str or pathlib.Path
        Name or path of the file to read in.
    value_unit : str, optional
        Unit the value column is converted to: ``hartree`` (default) for potentials, or
        ``au_dipole`` for transition dipoles. The file's declared value unit must share its
        dimension.
    encoding : str, optional
        Encoding of the file. Default is 'utf-8'.

    Returns
    -------
    CurveTable
        Table with R in bohr (ascending) and values in ``value_unit``.

    Raises
    ------
    CurveTableError
        If a row cannot be parsed (the message gives the line number), the units directive is
        missing or invalid, R is not strictly monotone, or there are fewer than 4 rows.

    Examples
    --------
    >>> v2 = rf.load_table("v2.dat")
    >>> mu12 = rf.load_table("mu12.dat", value_unit="au_dipole")

    """

    lines = _read_table_file(filepath, encoding)
    return parse_table(lines, value_unit=value_unit, source=str(filepath))


def config_header(config: Optional[dict[str, Any]]) -> list[str]:
    """Comment lines embedding the resolved configuration as one line of JSON."""

    if config is None:
        return []
    return [f"config: {json.dumps(config, sort_keys=True)}"]


def write_csv(
    filepath: Union[str, pathlib.Path],
    frame: pd.DataFrame,
    config: Optional[dict[str, Any]] = None,
    comments: Iterable[str] = (),
    encoding: str = "utf-8",
) -> pathlib.Path:
    """
    Write a data frame to a CSV file, preceded by ``#`` comment lines.

    The file is first written under a temporary name in the same directory and then renamed, so
    readers never see a partially written file.

    Parameters
    ----------
    filepath : str or pathlib.Path
        Destination file.
    frame : pandas.DataFrame
        Data to write. The index is not written.
    config : dict or None, optional
        Resolved run configuration, embedded as JSON in the first comment line.
    comments : Iterable[str], optional
        Further comment lines (without the leading ``#``).
    encoding : str, optional
        Encoding of the file. Default is 'utf-8'.

    Returns
    -------
    pathlib.Path
        Path of the written file.

    """

    path = pathlib.Path(filepath)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp")
    with open(tmp, "w", encoding=encoding, newline="") as file:
        for comment in [*config_header(config), *comments]:
            file.write(f"# {comment}\n")
        frame.to_csv(file, index=False, float_format="%.15g", lineterminator="\n")
    os.replace(tmp, path)
    return path


def read_csv(filepath: Union[str, pathlib.Path], encoding: str = "utf-8") -> pd.DataFrame:
    """Read a CSV file written by ``write_csv()``, skipping the comment lines."""

    return pd.read_csv(filepath, comment="#", encoding=encoding)


def read_comments(filepath: Union[str, pathlib.Path], encoding: str = "utf-8") -> list[str]:
    """Comment lines (without the leading ``# ``) at the top of an output file."""

    comments = []
    for line in _read_table_file(filepath, encoding):
        if not line.startswith("#"):
            break
        comments.append(line[1:].strip())
    return comments
