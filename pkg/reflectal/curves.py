"""
The curves module contains the four-channel electronic structure of a diatomic molecule: spline
fits of tabulated curves, the analytic surrogate for HI, Floquet (dressed state) two-state pairs
and the crossing geometry the Zhu-Nakamura formulas need.

Channel 1 is the electronic ground state. Channels 2 and 4 dissociate to H + I(2P3/2), channel 3
to H + I*(2P1/2). Each excited channel couples to the ground state through a transition dipole
mu_1j(R). Couplings among the excited channels are neglected.

The docstring code examples assume that ``reflectal`` has been imported
as ``rf``:

.. highlight:: python
.. code-block:: python

    >>> import reflectal as rf

"""

import logging
from dataclasses import dataclass, field, fields, replace
from typing import Any, Callable, Optional, Union

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq, minimize_scalar

from reflectal.converters import AMU, WAVENUMBER
from reflectal.fileio import CurveTable
from reflectal.utils import (
    CurveSetError,
    DegenerateGeometryError,
    TopologyNotFoundError,
    sign_changes,
)

logger = logging.getLogger(__name__)

Curve = Callable[[Any], Any]

EXCITED_CHANNELS = (2, 3, 4)
CHANNEL_LABELS = {1: "X1Sigma+", 2: "A1Pi1", 3: "a3Pi0+", 4: "a3Pi1"}
CHANNEL_ASYMPTOTES = {2: "I", 3: "I*", 4: "I"}
# I(2P1/2) - I(2P3/2)
SPIN_ORBIT_I = 7603.0 * WAVENUMBER
HI_REDUCED_MASS = 126.904 / 127.912 * AMU


class SplineCurve:
    """
    Natural cubic spline through tabulated samples, extended linearly beyond the data.

    The extension continues the value and slope of the spline at each end of the data range.

    Parameters
    ----------
    r : numpy.ndarray
        Strictly increasing knot positions (bohr).
    values : numpy.ndarray
        Values at the knots.

    """

    def __init__(self, r: np.ndarray, values: np.ndarray) -> None:
        self._spline = CubicSpline(r, values, bc_type="natural")
        self.r_min = float(r[0])
        self.r_max = float(r[-1])
        self._ends = (
            (self.r_min, float(values[0]), float(self._spline(self.r_min, 1))),
            (self.r_max, float(values[-1]), float(self._spline(self.r_max, 1))),
        )

    def __call__(self, r: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        x = np.asarray(r, dtype=float)
        out = np.asarray(self._spline(np.clip(x, self.r_min, self.r_max)))
        (lo, v_lo, s_lo), (hi, v_hi, s_hi) = self._ends
        out = np.where(x < lo, v_lo + s_lo * (x - lo), out)
        out = np.where(x > hi, v_hi + s_hi * (x - hi), out)
        return float(out) if out.ndim == 0 else out

    def derivative(self, r: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """First derivative, constant beyond the data range."""

        x = np.asarray(r, dtype=float)
        out = np.asarray(self._spline(np.clip(x, self.r_min, self.r_max), 1))
        return float(out) if out.ndim == 0 else out

    def __repr__(self) -> str:
        return f"SplineCurve(r_min={self.r_min}, r_max={self.r_max}, knots={len(self._spline.x)})"


def spline(table: CurveTable) -> SplineCurve:
    """
    Natural cubic spline interpolant of a curve table.

    Parameters
    ----------
    table : CurveTable
        Validated table (at least 4 strictly increasing points).

    Returns
    -------
    SplineCurve
        Callable curve, exact at the knots and linear beyond the data range.

    """

    return SplineCurve(table.r, table.values)


class CurveSet:
    """
    Potential curves and transition dipoles of a four-channel diatomic molecule.

    Parameters
    ----------
    mass : float
        Reduced mass (a.u.).
    potentials : tuple
        Callables V_1..V_4(R) in hartree.
    dipoles : tuple
        Callables mu_12, mu_13, mu_14(R) in a.u.
    domain : tuple
        Interval (bohr) over which the curves are trusted, e.g. the range of tabulated data.
    labels : dict, optional
        Channel index to electronic state label.
    asymptotes : dict, optional
        Excited channel index to the iodine atom state it dissociates to: "I" or "I*".
    check : bool, optional
        Check the curves are finite on the domain, the ground state is bound and the asymptote
        map is complete (default True).

    Raises
    ------
    CurveSetError
        If the checks fail.

    """

    # pylint: disable=too-many-arguments

    def __init__(
        self,
        mass: float,
        potentials: tuple[Curve, Curve, Curve, Curve],
        dipoles: tuple[Curve, Curve, Curve],
        domain: tuple[float, float],
        labels: Optional[dict[int, str]] = None,
        asymptotes: Optional[dict[int, str]] = None,
        check: bool = True,
    ) -> None:
        self.mass = float(mass)
        self.potentials = tuple(potentials)
        self.dipoles = tuple(dipoles)
        self.domain = (float(domain[0]), float(domain[1]))
        self.labels = dict(CHANNEL_LABELS if labels is None else labels)
        self.asymptotes = dict(CHANNEL_ASYMPTOTES if asymptotes is None else asymptotes)
        if check:
            self._check()

    def _check(self) -> None:
        if len(self.potentials) != 4 or len(self.dipoles) != 3:
            raise CurveSetError("A curve set needs 4 potentials and 3 transition dipoles.")
        if self.mass <= 0.0:
            raise CurveSetError(f"Reduced mass must be positive, got {self.mass}.")
        if not self.domain[1] > self.domain[0]:
            raise CurveSetError(f"Invalid curve domain {self.domain}.")
        if set(self.asymptotes) != set(EXCITED_CHANNELS) or not set(
            self.asymptotes.values()
        ) <= {"I", "I*"}:
            raise CurveSetError(
                f"Asymptote map must tag channels 2, 3, 4 as 'I' or 'I*', got {self.asymptotes}."
            )

        r = np.linspace(*self.domain, 512)
        for channel in range(1, 5):
            if not np.all(np.isfinite(self.potential(channel, r))):
                raise CurveSetError(f"V{channel} is not finite over {self.domain} bohr.")
        for channel in EXCITED_CHANNELS:
            if not np.all(np.isfinite(self.dipole(channel, r))):
                raise CurveSetError(f"mu1{channel} is not finite over {self.domain} bohr.")

        v1_min = float(np.min(self.potential(1, r)))
        for name in ("I", "I*"):
            limit = min(
                (
                    float(self.potential(ch, self.domain[1]))
                    for ch, atom in self.asymptotes.items()
                    if atom == name
                ),
                default=np.inf,
            )
            if not v1_min < limit:
                raise CurveSetError(
                    f"V1 minimum ({v1_min:.6g} Ha) is not below the H + {name} asymptote "
                    f"({limit:.6g} Ha); the ground state supports no bound level."
                )

    @classmethod
    def from_tables(
        cls,
        mass: float,
        potentials: tuple[CurveTable, CurveTable, CurveTable, CurveTable],
        dipoles: tuple[CurveTable, CurveTable, CurveTable],
        **kwargs: Any,
    ) -> "CurveSet":
        """
        Curve set from spline fits of tabulated potentials (hartree) and dipoles (a.u.).

        The domain is the range common to all tables.

        """

        tables = [*potentials, *dipoles]
        domain = (max(t.r[0] for t in tables), min(t.r[-1] for t in tables))
        if not domain[1] > domain[0]:
            raise CurveSetError("Curve tables do not share a common R range.")
        return cls(
            mass,
            tuple(spline(t) for t in potentials),  # type: ignore[arg-type]
            tuple(spline(t) for t in dipoles),  # type: ignore[arg-type]
            domain,
            **kwargs,
        )

    def potential(self, channel: int, r: Union[float, np.ndarray]) -> Any:
        """V_channel(R) in hartree, channel 1..4."""
        return self.potentials[channel - 1](r)

    def dipole(self, channel: int, r: Union[float, np.ndarray]) -> Any:
        """Transition dipole mu_1,channel(R) in a.u., channel 2..4."""
        return self.dipoles[channel - 2](r)

    def potential_matrix(self, r: np.ndarray, field_value: float) -> np.ndarray:
        """
        Potential-coupling matrices at positions ``r`` for instantaneous field ``field_value``.

        Returns an array of shape (len(r), 4, 4) with V_i(R) on the diagonal and
        -mu_1j(R) F on the first row and column.

        """

        r = np.asarray(r, dtype=float)
        out = np.zeros((r.size, 4, 4))
        for channel in range(1, 5):
            out[:, channel - 1, channel - 1] = self.potential(channel, r)
        for channel in EXCITED_CHANNELS:
            coupling = -self.dipole(channel, r) * field_value
            out[:, 0, channel - 1] = coupling
            out[:, channel - 1, 0] = coupling
        return out

    def channels_to(self, atom: str) -> tuple[int, ...]:
        """Excited channels dissociating to ``atom`` ("I" or "I*")."""
        return tuple(ch for ch in EXCITED_CHANNELS if self.asymptotes[ch] == atom)

    def __repr__(self) -> str:
        return f"CurveSet(mass={self.mass:.6g}, domain={self.domain})"


@dataclass(frozen=True)
class SurrogateParameters:
    """
    Parameters (atomic units) of the analytic HI surrogate.

    The ground state is a Morse curve D_e (1 - exp(-a (R - R_e)))^2. Excited channel i is the
    repulsive curve A_i exp(-b_i R) + C_i. The transition dipole to channel i is the Gaussian
    mu0_i exp(-((R - R_mu,i) / w_i)^2).

    The default exponents b_i are at least twice the Morse range parameter so each dressed ground
    state crosses every excited curve once, on the outer side of the well.

    """

    # pylint: disable=too-many-instance-attributes

    mass: float = HI_REDUCED_MASS
    morse_depth: float = 0.1172
    morse_range: float = 0.9232
    morse_r_e: float = 3.04
    a2: float = 40.56
    b2: float = 2.0
    c2: float = 0.1172
    a3: float = 50.74
    b3: float = 2.2
    c3: float = 0.1172 + SPIN_ORBIT_I
    a4: float = 26.70
    b4: float = 1.9
    c4: float = 0.1172
    mu12: tuple[float, float, float] = (0.15, 3.0, 1.2)
    mu13: tuple[float, float, float] = (0.2, 3.2, 1.0)
    mu14: tuple[float, float, float] = (0.1, 2.8, 1.4)
    domain: tuple[float, float] = (1.5, 10.0)

    def v1(self, r: Union[float, np.ndarray]) -> Any:
        """Morse ground state (hartree)."""
        return self.morse_depth * (1.0 - np.exp(-self.morse_range * (r - self.morse_r_e))) ** 2

    def repulsive(self, channel: int, r: Union[float, np.ndarray]) -> Any:
        """Repulsive excited state ``channel`` (hartree)."""
        a, b, c = (getattr(self, f"{name}{channel}") for name in "abc")
        return a * np.exp(-b * np.asarray(r, dtype=float)) + c

    def dipole(self, channel: int, r: Union[float, np.ndarray]) -> Any:
        """Transition dipole to ``channel`` (a.u.)."""
        mu0, r_mu, width = getattr(self, f"mu1{channel}")
        return mu0 * np.exp(-(((np.asarray(r, dtype=float) - r_mu) / width) ** 2))

    def with_spin_orbit(self, splitting: float) -> "SurrogateParameters":
        """Copy with the I* asymptote placed ``splitting`` hartree above the I asymptote."""
        return replace(self, c3=self.c2 + splitting)

    def override(self, **kwargs: Any) -> "SurrogateParameters":
        """
        Copy with some parameters replaced. ``spin_orbit`` is accepted in place of ``c3``.

        Raises
        ------
        CurveSetError
            On unknown parameter names.

        """

        spin_orbit = kwargs.pop("spin_orbit", None)
        known = {f.name for f in fields(self)}
        unknown = set(kwargs) - known
        if unknown:
            raise CurveSetError(f"Unknown surrogate parameters: {sorted(unknown)}.")
        params = replace(
            self, **{k: tuple(v) if isinstance(v, list) else v for k, v in kwargs.items()}
        )
        return params if spin_orbit is None else params.with_spin_orbit(spin_orbit)


class _SurrogateCurve:
    """Picklable excited-state potential or dipole of a surrogate."""

    def __init__(self, params: SurrogateParameters, channel: int, dipole: bool = False) -> None:
        self.params = params
        self.channel = channel
        self.dipole = dipole

    def __call__(self, r: Union[float, np.ndarray]) -> Any:
        if self.dipole:
            return self.params.dipole(self.channel, r)
        return self.params.repulsive(self.channel, r)


def surrogate_hi(params: Optional[SurrogateParameters] = None, **overrides: Any) -> CurveSet:
    """
    Analytic four-channel surrogate for HI.

    Parameters
    ----------
    params : SurrogateParameters or None, optional
        Parameter set. Defaults to ``SurrogateParameters()``.
    **overrides
        Individual parameters to replace, e.g. ``b4=1.95`` or ``spin_orbit=0.03``.

    Returns
    -------
    CurveSet
        The surrogate curve set.

    Raises
    ------
    CurveSetError
        If D_e <= 0, C_2 != C_4, C_3 <= C_2, or any range parameter or width is not positive.

    Examples
    --------
    >>> curves = rf.surrogate_hi()
    >>> curves.asymptotes
    {2: 'I', 3: 'I*', 4: 'I'}

    """

    p = (params or SurrogateParameters()).override(**overrides)
    if p.morse_depth <= 0.0:
        raise CurveSetError(f"Morse depth D_e must be positive, got {p.morse_depth}.")
    if p.morse_range <= 0.0 or min(p.b2, p.b3, p.b4) <= 0.0:
        raise CurveSetError("Morse range and repulsive exponents must be positive.")
    if p.c2 != p.c4 or not p.c2 < p.c3:
        raise CurveSetError(
            f"Asymptotes must satisfy C2 = C4 < C3 (I below I*), got C2={p.c2}, C3={p.c3}, "
            f"C4={p.c4}."
        )
    if min(p.mu12[2], p.mu13[2], p.mu14[2]) <= 0.0:
        raise CurveSetError("Dipole widths must be positive.")

    return CurveSet(
        p.mass,
        (p.v1, _SurrogateCurve(p, 2), _SurrogateCurve(p, 3), _SurrogateCurve(p, 4)),
        (_SurrogateCurve(p, 2, True), _SurrogateCurve(p, 3, True), _SurrogateCurve(p, 4, True)),
        p.domain,
    )


@dataclass(frozen=True)
class DressedPair:
    """
    Two-state dressed diabatic system of the ground state plus one photon and excited channel i.

    diabat1(R) = V_1(R) + omega, diabat2(R) = V_i(R), coupling(R) = mu_1i(R) F0 / 2, all in hartree.

    Parameters
    ----------
    curves : CurveSet
        Source curves.
    channel : int
        Excited channel i (2, 3 or 4).
    omega : float
        Photon energy (hartree).
    field_amplitude : float
        Peak field amplitude F0 (a.u.).

    """

    curves: CurveSet = field(repr=False)
    channel: int
    omega: float
    field_amplitude: float

    @property
    def mass(self) -> float:
        """Reduced mass (a.u.)."""
        return self.curves.mass

    @property
    def domain(self) -> tuple[float, float]:
        """Trusted R range of the underlying curves (bohr)."""
        return self.curves.domain

    def diabat1(self, r: Union[float, np.ndarray]) -> Any:
        """Dressed ground state V_1 + omega."""
        return self.curves.potential(1, r) + self.omega

    def diabat2(self, r: Union[float, np.ndarray]) -> Any:
        """Excited state V_i."""
        return self.curves.potential(self.channel, r)

    def coupling(self, r: Union[float, np.ndarray]) -> Any:
        """Dressed coupling mu_1i F0 / 2."""
        return self.curves.dipole(self.channel, r) * self.field_amplitude / 2.0

    def adiabats(self, r: Union[float, np.ndarray]) -> tuple[Any, Any]:
        """Lower and upper adiabats E_1(R) <= E_2(R)."""

        h11 = self.diabat1(r)
        h22 = self.diabat2(r)
        mean = 0.5 * (h11 + h22)
        half_gap = np.hypot(0.5 * (h11 - h22), self.coupling(r))
        return mean - half_gap, mean + half_gap

    def lower(self, r: Union[float, np.ndarray]) -> Any:
        """Lower adiabat E_1(R)."""
        return self.adiabats(r)[0]

    def upper(self, r: Union[float, np.ndarray]) -> Any:
        """Upper adiabat E_2(R)."""
        return self.adiabats(r)[1]


def dress(curves: CurveSet, channel: int, omega: float, field_amplitude: float) -> DressedPair:
    """
    Floquet (dressed state) two-state pair of the ground state and one excited channel.

    Parameters
    ----------
    curves : CurveSet
        Source curves.
    channel : int
        Excited channel, 2, 3 or 4.
    omega : float
        Photon energy (hartree), > 0.
    field_amplitude : float
        Peak field F0 (a.u.), >= 0.

    Returns
    -------
    DressedPair
        The dressed pair.

    Raises
    ------
    CurveSetError
        If the channel, photon energy or field is out of range.

    """

    if channel not in EXCITED_CHANNELS:
        raise CurveSetError(f"Dressed channel must be one of 2, 3, 4, got {channel}.")
    if not omega > 0.0:
        raise CurveSetError(f"Photon energy must be positive, got {omega}.")
    if field_amplitude < 0.0:
        raise CurveSetError(f"Field amplitude must be non-negative, got {field_amplitude}.")
    return DressedPair(curves, channel, float(omega), float(field_amplitude))


@dataclass(frozen=True)
class CrossingFeatures:
    """
    Geometry of one nonadiabatic tunneling type avoided crossing.

    Parameters
    ----------
    x_t, x_b : float
        Positions (bohr) of the lower adiabat top and the upper adiabat bottom.
    e_t, e_b : float
        E_1(x_t) and E_2(x_b) (hartree).
    gamma : float
        (E_b - E_t) / (E_2(xbar) - E_1(xbar)) at xbar = (x_t + x_b) / 2.
    alpha : float
        (1 - gamma^2) / (m (x_b - x_t)^2 (E_b - E_t)).
    r_x : float
        Diabatic crossing point (bohr).
    pair : DressedPair
        The pair the features were extracted from.

    """

    # pylint: disable=too-many-instance-attributes

    x_t: float
    x_b: float
    e_t: float
    e_b: float
    gamma: float
    alpha: float
    r_x: float
    pair: DressedPair = field(repr=False, compare=False)

    @property
    def mass(self) -> float:
        """Reduced mass (a.u.)."""
        return self.pair.mass


def _crossing_point(pair: DressedPair, step: float) -> float:
    """Diabatic crossing where diabat1 - diabat2 turns from negative to positive."""

    lo, hi = pair.domain
    r = np.linspace(lo, hi, max(int(np.ceil((hi - lo) / step)) + 1, 16))

    def diff(x: float) -> float:
        return float(pair.diabat1(x) - pair.diabat2(x))

    d = pair.diabat1(r) - pair.diabat2(r)
    rising = [j for j in sign_changes(d) if d[j + 1] > d[j]]
    if not rising:
        raise TopologyNotFoundError(
            f"Dressed ground state (omega = {pair.omega:.6g} Ha) does not cross channel "
            f"{pair.channel} inside {pair.domain} bohr."
        )
    j = rising[0]
    r_x = r[j] if d[j] == 0.0 else brentq(diff, r[j], r[j + 1], xtol=1e-13)

    eps = 1e-6
    slope1 = (pair.diabat1(r_x + eps) - pair.diabat1(r_x - eps)) / (2 * eps)
    slope2 = (pair.diabat2(r_x + eps) - pair.diabat2(r_x - eps)) / (2 * eps)
    if slope1 * slope2 >= 0.0:
        raise TopologyNotFoundError(
            f"Crossing with channel {pair.channel} at R = {r_x:.6g} bohr has same-sign slopes "
            "(Landau-Zener type)."
        )
    return float(r_x)


def _local_extremum(
    func: Callable[[np.ndarray], np.ndarray],
    r: np.ndarray,
    target: float,
    xtol: float,
    what: str,
) -> float:
    """Local minimum of ``func`` sampled on ``r`` closest to ``target``, refined by golden section."""

    values = func(r)
    inner = values[1:-1]
    candidates = np.nonzero((inner < values[:-2]) & (inner < values[2:]))[0] + 1
    if candidates.size == 0:
        raise TopologyNotFoundError(f"No interior {what} near R = {target:.6g} bohr.")
    j = int(candidates[np.argmin(np.abs(r[candidates] - target))])
    result = minimize_scalar(
        lambda x: float(func(x)),
        bracket=(r[j - 1], r[j], r[j + 1]),
        method="golden",
        tol=xtol,
    )
    return float(result.x)


def extract_features(
    pair: DressedPair,
    step: float = 1.0e-3,
    window: float = 1.0,
    xtol: float = 1.0e-10,
) -> CrossingFeatures:
    """
    Locate the barrier top of the lower adiabat and the well bottom of the upper adiabat around
    the diabatic crossing, and compute the Zhu-Nakamura geometry parameters.

    The extrema are bracketed by a scan of half-width ``window`` around the crossing point and
    refined by golden-section search. The scan step is reduced below ``step`` when the avoided
    crossing is narrower than the step.

    Parameters
    ----------
    pair : DressedPair
        Dressed two-state pair.
    step : float, optional
        Coarse scan step (bohr). Default 1e-3.
    window : float, optional
        Half-width (bohr) of the scan around the crossing point. Default 1.
    xtol : float, optional
        Relative tolerance of the golden-section refinement. Default 1e-10.

    Returns
    -------
    CrossingFeatures
        The crossing geometry.

    Raises
    ------
    TopologyNotFoundError
        If there is no opposite-slope crossing, or no interior top/bottom pair, inside the
        curve domain.
    DegenerateGeometryError
        If |x_b - x_t| < 1e-4 bohr, E_b <= E_t, gamma > 1 (alpha <= 0), or the midpoint xbar lies
        outside the curve domain.

    Examples
    --------
    >>> curves = rf.surrogate_hi()
    >>> pair = rf.dress(curves, 2, rf.convert(4.0, "eV", "hartree"), 5.34e-3)
    >>> features = rf.extract_features(pair)
    >>> features.e_b > features.e_t
    True

    """

    lo, hi = pair.domain
    r_x = _crossing_point(pair, step)

    eps = 1e-6
    d_slope = abs(
        (pair.diabat1(r_x + eps) - pair.diabat2(r_x + eps))
        - (pair.diabat1(r_x - eps) - pair.diabat2(r_x - eps))
    ) / (2 * eps)
    width = abs(float(pair.coupling(r_x))) / d_slope
    scan_step = min(step, max(width / 10.0, 1.0e-7))
    half = min(window, 2000 * scan_step)
    r = np.arange(max(lo, r_x - half), min(hi, r_x + half) + 0.5 * scan_step, scan_step)
    if r.size < 3:
        raise TopologyNotFoundError(f"Crossing at R = {r_x:.6g} bohr is at the domain edge.")

    x_t = _local_extremum(lambda x: -pair.lower(x), r, r_x, xtol, "lower adiabat top")
    x_b = _local_extremum(pair.upper, r, r_x, xtol, "upper adiabat bottom")
    for name, x in (("R_x", r_x), ("x_t", x_t), ("x_b", x_b)):
        if not lo < x < hi:
            raise TopologyNotFoundError(f"{name} = {x:.6g} bohr is not inside {pair.domain}.")

    e_t = float(pair.lower(x_t))
    e_b = float(pair.upper(x_b))
    logger.debug(
        "Channel %d, omega %.8g Ha: R_x=%.8f x_t=%.8f x_b=%.8f E_t=%.10g E_b=%.10g",
        pair.channel,
        pair.omega,
        r_x,
        x_t,
        x_b,
        e_t,
        e_b,
    )

    if abs(x_b - x_t) < 1.0e-4:
        raise DegenerateGeometryError(
            f"|x_b - x_t| = {abs(x_b - x_t):.3g} bohr < 1e-4 bohr (nearly symmetric crossing "
            f"at R = {r_x:.6g} bohr); alpha is indeterminate."
        )
    if not e_b > e_t:
        raise DegenerateGeometryError(f"E_b ({e_b:.10g}) is not above E_t ({e_t:.10g}).")
    x_bar = 0.5 * (x_t + x_b)
    if not lo <= x_bar <= hi:
        raise DegenerateGeometryError(f"Midpoint {x_bar:.6g} bohr lies outside {pair.domain}.")
    e1_bar, e2_bar = pair.adiabats(x_bar)
    gamma = (e_b - e_t) / float(e2_bar - e1_bar)
    alpha = (1.0 - gamma**2) / (pair.mass * (x_b - x_t) ** 2 * (e_b - e_t))
    if not alpha > 0.0:
        raise DegenerateGeometryError(f"gamma = {gamma:.12g} > 1 gives alpha = {alpha:.6g} <= 0.")

    return CrossingFeatures(x_t, x_b, e_t, e_b, gamma, alpha, r_x, pair)
