"""
``reflectal`` is a Python package for laser control of the photodissociation branching of
hydrogen iodide (HI) into H + I and H + I*, based on the complete reflection phenomenon of
nonadiabatic tunneling type curve crossings.

A continuous-wave laser dresses the ground electronic state by one photon, creating avoided
crossings with the repulsive excited states. At photon energies where the Zhu-Nakamura phase of
a crossing equals (n + 1/2) pi, the wavepacket is completely reflected and dissociation along
that channel stops. The package locates these frequencies semiclassically, and checks them with
a four-channel wavepacket propagation that measures the dissociation flux into every channel.

The semiclassical formulas use NumPy and SciPy routines, with a 50-digit SymPy evaluation of the
Stokes phase available as a reference. The propagation uses a sixth-order split-operator scheme
on a Fourier grid.

The docstring code examples assume the ``reflectal`` package has been
imported as ``rf``:

.. highlight:: python
.. code-block:: python

    >>> import reflectal as rf

"""

__version__ = "0.1.0"

from reflectal import config
from reflectal.converters import convert, field_from_intensity, intensity_from_field
from reflectal.curves import (
    CurveSet,
    SplineCurve,
    SurrogateParameters,
    dress,
    extract_features,
    spline,
    surrogate_hi,
)
from reflectal.fileio import load_table, read_csv
from reflectal.flux import FluxRecord, accumulate_flux, branching, instantaneous_flux
from reflectal.grid import RadialGrid, make_grid
from reflectal.propagation import (
    FieldSpec,
    PropagationConfig,
    build_field,
    propagate,
    split_coefficients,
)
from reflectal.vibrational import eigensolve
from reflectal.zhunakamura import (
    AlignedSurrogate,
    action_sigma,
    align_surrogate,
    find_control_frequency,
    manifold,
    stokes_phase,
    transmission,
    transmission_probability,
    zn_assemble,
)
