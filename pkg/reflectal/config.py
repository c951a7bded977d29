"""
The config module contains ``RunConfig``, the run configuration read from a JSON file by the
command line interface.

Every dimensional value in the file is an object with a value and a unit, e.g.
``{"value": 3.58, "unit": "eV"}``, and is held in atomic units once loaded. Bare numbers are
accepted for dimensionless entries (point counts, levels, sample counts, ramp cycles, worker
counts) and for surrogate parameter overrides, which are in atomic units. A minimal file:

.. code-block:: json

    {
        "curves": {"source": "surrogate"},
        "field": {"intensity": {"value": 1.0, "unit": "TW/cm2"},
                  "omega": {"value": 4.1, "unit": "eV"}},
        "initial_state": {"v": 3}
    }

The docstring code examples assume that ``reflectal`` has been imported
as ``rf``:

.. highlight:: python
.. code-block:: python

    >>> import reflectal as rf

"""

import json
import pathlib
from dataclasses import asdict, dataclass, field
from typing import Any, Optional, Union

import numpy as np

from reflectal.converters import FEMTOSECOND, UnitConverter
from reflectal.curves import EXCITED_CHANNELS, CurveSet, SurrogateParameters, surrogate_hi
from reflectal.fileio import load_table
from reflectal.grid import RadialGrid
from reflectal.propagation import RAMP_CYCLES, FieldSpec, PropagationConfig
from reflectal.utils import ConfigError, UnitError
from reflectal.zhunakamura import TUNABLE_PARAMETERS

SECTIONS = {
    "curves",
    "grid",
    "field",
    "eigen",
    "initial_state",
    "manifold",
    "propagation",
    "output",
    "workers",
}
DEFAULT_INTENSITY = {"value": 1.0, "unit": "TW/cm2"}
DEFAULT_DURATION = {"value": 3.5, "unit": "ps"}
DEFAULT_TOLERANCE = {"value": 1.0e-3, "unit": "eV"}


def _read_config_file(filepath: Union[str, pathlib.Path], encoding: str) -> str:
    """Read a configuration file into a string."""

    with open(filepath, encoding=encoding) as file:
        return file.read()


def quantity(
    section: dict[str, Any],
    key: str,
    dimension: str,
    default: Optional[dict[str, Any]] = None,
) -> float:
    """
    Atomic-unit value of a unit-annotated entry ``{"value": ..., "unit": ...}``.

    Parameters
    ----------
    section : dict
        Configuration section holding the entry.
    key : str
        Entry name.
    dimension : str
        Required dimension, e.g. ``energy`` or ``length``.
    default : dict or None, optional
        Unit-annotated default used when the entry is absent.

    Raises
    ------
    ConfigError
        If the entry is missing without default, is not a value/unit object, or has a unit of
        another dimension.

    Examples
    --------
    >>> rf.config.quantity({"omega": {"value": 1.0, "unit": "eV"}}, "omega", "energy")
    0.03674932

    """

    entry = section.get(key, default)
    if entry is None:
        raise ConfigError(f"Missing entry '{key}'.")
    if not isinstance(entry, dict) or set(entry) != {"value", "unit"}:
        raise ConfigError(
            f"Entry '{key}' must be an object {{\"value\": <number>, \"unit\": <unit>}}, "
            f"got {entry!r}."
        )
    try:
        unit_dimension = UnitConverter.dimension(entry["unit"])
    except UnitError as err:
        raise ConfigError(f"Entry '{key}': {err}") from err
    if unit_dimension != dimension:
        raise ConfigError(
            f"Entry '{key}' needs a unit of {dimension}, got '{entry['unit']}' ({unit_dimension})."
        )
    return UnitConverter.to_atomic(float(entry["value"]), entry["unit"])


def _integer(section: dict[str, Any], key: str, default: int, minimum: int) -> int:
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigError(f"Entry '{key}' must be an integer >= {minimum}, got {value!r}.")
    return value


def _surrogate_override(value: Any) -> Any:
    if isinstance(value, dict):
        return UnitConverter.to_atomic(float(value["value"]), value["unit"])
    return value


@dataclass(frozen=True)
class ScanRange:
    """Evenly spaced photon energies from ``start`` to ``stop`` (hartree), both included."""

    start: float
    stop: float
    samples: int

    def __post_init__(self) -> None:
        if not self.start < self.stop:
            raise ConfigError(f"omega_range start {self.start} must be below stop {self.stop}.")
        if self.samples < 1:
            raise ConfigError(f"omega_range needs at least 1 sample, got {self.samples}.")
        if not self.start > 0.0:
            raise ConfigError("Photon energies must be positive.")

    def values(self) -> np.ndarray:
        """The sampled photon energies (hartree)."""
        return np.linspace(self.start, self.stop, self.samples)


@dataclass(frozen=True)
class RunConfig:
    """
    Fully resolved run configuration, all quantities in atomic units.

    Use ``RunConfig.from_file()`` or ``RunConfig.from_dict()`` to create one.

    """

    # pylint: disable=too-many-instance-attributes

    curve_source: str
    surrogate: Optional[SurrogateParameters]
    mass: Optional[float]
    potential_tables: tuple[pathlib.Path, ...]
    dipole_tables: tuple[pathlib.Path, ...]
    grid: RadialGrid
    field_amplitude: float
    omega: Optional[float]
    omega_range: Optional[ScanRange]
    ramp_cycles: float
    eigen_states: int
    initial_v: int
    manifold_levels: tuple[int, ...]
    manifold_channels: tuple[int, ...]
    manifold_samples: int
    manifold_tolerance: float
    propagation: PropagationConfig
    duration: float
    output: pathlib.Path
    workers: int = 1
    align_parameter: str = "a4"
    source: Optional[pathlib.Path] = field(default=None, compare=False)

    @classmethod
    def from_file(
        cls,
        filepath: Union[str, pathlib.Path],
        output: Optional[Union[str, pathlib.Path]] = None,
        workers: Optional[int] = None,
        encoding: str = "utf-8",
    ) -> "RunConfig":
        """
        Read a JSON configuration file.

        Relative table paths and the output directory are taken relative to the file's
        directory. ``output`` and ``workers`` override the values in the file.

        Raises
        ------
        ConfigError
            If the file cannot be read or parsed, or any entry is invalid.

        """

        path = pathlib.Path(filepath)
        try:
            text = _read_config_file(path, encoding)
        except OSError as err:
            raise ConfigError(f"Cannot read configuration file {path}: {err}") from err
        try:
            data = json.loads(text)
        except json.JSONDecodeError as err:
            raise ConfigError(f"{path}: invalid JSON ({err})") from err
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: the configuration must be a JSON object.")
        if output is not None:
            data["output"] = str(pathlib.Path(output).resolve())
        if workers is not None:
            data["workers"] = workers
        return cls.from_dict(data, base_dir=path.parent, source=path)

    @classmethod
    def from_dict(
        cls,
        data: dict[str, Any],
        base_dir: Union[str, pathlib.Path] = ".",
        source: Optional[pathlib.Path] = None,
    ) -> "RunConfig":
        """
        Configuration from a parsed JSON document.

        Raises
        ------
        ConfigError
            On unknown sections, missing or malformed entries, or inconsistent values.
        GridError, DetectorError
            If the grid or the detector placement is invalid.

        """

        # pylint: disable=too-many-locals
        unknown = set(data) - SECTIONS
        if unknown:
            raise ConfigError(f"Unknown configuration sections: {sorted(unknown)}.")
        base = pathlib.Path(base_dir)

        curves = data.get("curves", {"source": "surrogate"})
        curve_source = curves.get("source", "surrogate")
        surrogate, mass, potentials, dipoles = None, None, (), ()
        if curve_source == "surrogate":
            overrides = {
                k: _surrogate_override(v) for k, v in curves.get("parameters", {}).items()
            }
            surrogate = SurrogateParameters().override(**overrides)
        elif curve_source == "tables":
            mass = quantity(curves, "mass", "mass")
            potentials = tuple(base / p for p in curves.get("potentials", []))
            dipoles = tuple(base / p for p in curves.get("dipoles", []))
            if len(potentials) != 4 or len(dipoles) != 3:
                raise ConfigError("Tables need 4 potential files and 3 dipole files.")
            missing = [str(p) for p in (*potentials, *dipoles) if not p.is_file()]
            if missing:
                raise ConfigError(f"Curve table files not found: {missing}.")
        else:
            raise ConfigError(f"Curve source must be 'surrogate' or 'tables', got {curve_source!r}.")

        grid_section = data.get("grid", {})
        grid = RadialGrid(
            quantity(grid_section, "r_min", "length", {"value": 1.5, "unit": "bohr"}),
            quantity(grid_section, "r_max", "length", {"value": 10.0, "unit": "bohr"}),
            _integer(grid_section, "points", 1024, 8),
        )

        field_section = data.get("field", {})
        if "amplitude" in field_section and "intensity" in field_section:
            raise ConfigError("Give either the field amplitude or the intensity, not both.")
        if "amplitude" in field_section:
            amplitude = quantity(field_section, "amplitude", "field")
        else:
            intensity = quantity(field_section, "intensity", "intensity", DEFAULT_INTENSITY)
            amplitude = UnitConverter.unit_conv(intensity, "au_intensity", "au_field")
        if ("omega" in field_section) == ("omega_range" in field_section):
            raise ConfigError("The field section needs exactly one of 'omega' or 'omega_range'.")
        omega, omega_range = None, None
        if "omega" in field_section:
            omega = quantity(field_section, "omega", "energy")
            if not omega > 0.0:
                raise ConfigError(f"Photon energy must be positive, got {omega}.")
        else:
            scan = field_section["omega_range"]
            omega_range = ScanRange(
                quantity(scan, "start", "energy"),
                quantity(scan, "stop", "energy"),
                _integer(scan, "samples", 1, 1),
            )
        ramp_cycles = float(field_section.get("ramp_cycles", RAMP_CYCLES))
        if ramp_cycles < 0.0:
            raise ConfigError(f"ramp_cycles must be non-negative, got {ramp_cycles}.")

        eigen = data.get("eigen", {})
        initial = data.get("initial_state", {})
        eigen_states = _integer(eigen, "states", 6, 1)
        initial_v = _integer(initial, "v", 0, 0)

        manifold = data.get("manifold", {})
        levels = tuple(manifold.get("levels", [3, 4, 5]))
        channels = tuple(manifold.get("channels", list(EXCITED_CHANNELS)))
        if not levels or any(not isinstance(v, int) or v < 0 for v in levels):
            raise ConfigError(f"Manifold levels must be non-negative integers, got {levels}.")
        if not channels or any(ch not in EXCITED_CHANNELS for ch in channels):
            raise ConfigError(f"Manifold channels must be among 2, 3, 4, got {channels}.")
        eigen_states = max(eigen_states, initial_v + 1, max(levels) + 1)
        align_parameter = manifold.get("align_parameter", "a4")
        if align_parameter not in TUNABLE_PARAMETERS:
            raise ConfigError(
                f"align_parameter must be one of {TUNABLE_PARAMETERS}, got {align_parameter!r}."
            )

        prop = data.get("propagation", {})
        cap = prop.get("cap", {})
        propagation = PropagationConfig(
            time_step=quantity(prop, "time_step", "time", {"value": 0.043, "unit": "fs"}),
            detector=quantity(prop, "detector", "length", {"value": 6.0, "unit": "bohr"}),
            output_stride=_integer(prop, "output_stride", 50, 1),
            cap_onset=quantity(cap, "onset", "length", {"value": 9.0, "unit": "bohr"}),
            cap_width=quantity(cap, "width", "length", {"value": 1.0, "unit": "bohr"}),
            cap_strength=quantity(
                cap, "strength", "energy", {"value": 0.15, "unit": "hartree"}
            ),
            cap_ground=bool(cap.get("ground", False)),
            order=_integer(prop, "order", 6, 2),
        )
        propagation.check_grid(grid)
        duration = quantity(prop, "duration", "time", DEFAULT_DURATION)
        if duration < 0.0:
            raise ConfigError(f"Duration must be non-negative, got {duration / FEMTOSECOND} fs.")

        return cls(
            curve_source=curve_source,
            surrogate=surrogate,
            mass=mass,
            potential_tables=potentials,
            dipole_tables=dipoles,
            grid=grid,
            field_amplitude=amplitude,
            omega=omega,
            omega_range=omega_range,
            ramp_cycles=ramp_cycles,
            eigen_states=eigen_states,
            initial_v=initial_v,
            manifold_levels=levels,
            manifold_channels=channels,
            manifold_samples=_integer(manifold, "samples", 2000, 2),
            manifold_tolerance=quantity(manifold, "tolerance", "energy", DEFAULT_TOLERANCE),
            propagation=propagation,
            duration=duration,
            output=base / data.get("output", "output"),
            workers=_integer(data, "workers", 1, 1),
            align_parameter=align_parameter,
            source=source,
        )

    def require_omega(self) -> float:
        """The single photon energy, or ``ConfigError`` when the file gives a range."""
        if self.omega is None:
            raise ConfigError("This command needs 'omega' in the field section.")
        return self.omega

    def require_omega_range(self) -> ScanRange:
        """The photon energy range, or ``ConfigError`` when the file gives a single value."""
        if self.omega_range is None:
            raise ConfigError("This command needs 'omega_range' in the field section.")
        return self.omega_range

    def build_curves(self) -> CurveSet:
        """The curve set: the surrogate, or spline fits of the configured tables."""

        if self.curve_source == "surrogate":
            return surrogate_hi(self.surrogate)
        potentials = tuple(load_table(p) for p in self.potential_tables)
        dipoles = tuple(load_table(p, value_unit="au_dipole") for p in self.dipole_tables)
        return CurveSet.from_tables(self.mass, potentials, dipoles)  # type: ignore[arg-type]

    def field_spec(self, omega: float) -> FieldSpec:
        """Laser field of this run at photon energy ``omega`` (hartree)."""
        return FieldSpec(
            amplitude=self.field_amplitude,
            omega=omega,
            duration=self.duration,
            ramp=self.ramp_cycles * 2.0 * np.pi / omega,
        )

    def resolved(self) -> dict[str, Any]:
        """
        JSON-serialisable dictionary of the full configuration in atomic units, defaults
        included. The output directory and worker count are left out so that results do not
        depend on where or how widely a run was executed.

        """

        curves: dict[str, Any] = {"source": self.curve_source}
        if self.surrogate is not None:
            curves["parameters"] = asdict(self.surrogate)
        else:
            curves["mass"] = self.mass
            curves["potentials"] = [str(p) for p in self.potential_tables]
            curves["dipoles"] = [str(p) for p in self.dipole_tables]
        field_section: dict[str, Any] = {
            "amplitude": self.field_amplitude,
            "ramp_cycles": self.ramp_cycles,
        }
        if self.omega is not None:
            field_section["omega"] = self.omega
        else:
            field_section["omega_range"] = asdict(self.require_omega_range())
        return {
            "curves": curves,
            "grid": {"r_min": self.grid.r_min, "r_max": self.grid.r_max, "points": self.grid.n},
            "field": field_section,
            "eigen": {"states": self.eigen_states},
            "initial_state": {"v": self.initial_v},
            "manifold": {
                "levels": list(self.manifold_levels),
                "channels": list(self.manifold_channels),
                "samples": self.manifold_samples,
                "tolerance": self.manifold_tolerance,
                "align_parameter": self.align_parameter,
            },
            "propagation": {**asdict(self.propagation), "duration": self.duration},
            "units": "atomic",
        }
