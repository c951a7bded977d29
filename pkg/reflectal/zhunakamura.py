"""
The zhunakamura module contains the Zhu-Nakamura semiclassical formulas for transmission through a
nonadiabatic tunneling type curve crossing, the complete reflection manifolds of a dressed
diatomic molecule, and the search for laser frequencies that block two dissociation channels at
once.

Transmission through the crossing vanishes whenever the phase Psi(E) equals (n + 1/2) pi. For a
molecule prepared in vibrational level v of the ground state and dressed by one photon, the
manifold Psi_v(omega) = Psi(E_v + omega) gives the photon energies at which dissociation along
one excited channel stops.

The docstring code examples assume that ``reflectal`` has been imported
as ``rf``, and NumPy as ``np``:

.. highlight:: python
.. code-block:: python

    >>> import numpy as np
    >>> import reflectal as rf

"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, NamedTuple, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.optimize import brentq
from scipy.special import loggamma
from sympy import I, N, Rational, im, log
from sympy import pi as sym_pi
from sympy import loggamma as sym_loggamma
from sympy.core.expr import Expr

from reflectal.converters import EV
from reflectal.curves import (
    CrossingFeatures,
    CurveSet,
    SurrogateParameters,
    dress,
    extract_features,
    surrogate_hi,
)
from reflectal.utils import (
    AlignmentError,
    EmptyWindowError,
    ReflectalError,
    ZnDomainError,
    expand_bracket,
)

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to theta in [-pi/2, pi/2]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return 0.5 * np.pi * nodes, 0.5 * np.pi * weights


def _turning_point(
    excess: Callable[[float], float], start: float, direction: float, limit: float
) -> float:
    inside, outside = expand_bracket(excess, start, direction * 1.0e-6, limit)
    if excess(outside) < 0.0:
        raise ZnDomainError(
            f"Upper adiabat stays below the energy up to R = {outside:.6g} bohr; no turning point."
        )
    return float(brentq(excess, inside, outside, xtol=1.0e-13))


def action_sigma(
    upper: Callable,
    energy: float,
    mass: float,
    x_b: float,
    bounds: tuple[float, float] = (-np.inf, np.inf),
    rtol: float = 1.0e-10,
    max_order: int = 8192,
) -> float:
    """
    Action integral sigma = int_{t1}^{t2} sqrt(2 m (E - E_2(x))) dx across the well of the upper
    adiabat.

    The turning points are bracketed by marching out from the well bottom and refined by Brent's
    method. The integral is evaluated after the substitution x = c + h sin(theta), which removes
    the square root singularities at the turning points, with Gauss-Legendre quadrature whose order
    is doubled (from 64) until the relative change is below ``rtol``.

    Parameters
    ----------
    upper : Callable
        Upper adiabat E_2(x) (hartree), vectorized over numpy arrays.
    energy : float
        Total energy E (hartree).
    mass : float
        Reduced mass (a.u.).
    x_b : float
        Position of the well bottom (bohr).
    bounds : tuple, optional
        R range the turning points must lie in.
    rtol : float, optional
        Relative convergence tolerance. Default 1e-10.
    max_order : int, optional
        Largest quadrature order tried. Default 8192.

    Returns
    -------
    float
        sigma (radians).

    Raises
    ------
    ZnDomainError
        If E <= E_2(x_b), or a turning point is not found inside ``bounds``.

    Examples
    --------
    >>> omega = 0.01
    >>> round(rf.action_sigma(lambda x: 0.5 * omega**2 * x**2, 0.02, 1.0, 0.0) / np.pi, 10)
    2.0

    """

    # pylint: disable=too-many-arguments
    e_b = float(upper(x_b))
    if not energy > e_b:
        raise ZnDomainError(f"E = {energy:.12g} Ha is not above E_b = {e_b:.12g} Ha.")

    def excess(x: float) -> float:
        return float(upper(x)) - energy

    t1 = _turning_point(excess, x_b, -1.0, bounds[0])
    t2 = _turning_point(excess, x_b, 1.0, bounds[1])
    centre, half = 0.5 * (t1 + t2), 0.5 * (t2 - t1)
    if half <= 0.0:
        return 0.0

    def quadrature(order: int) -> float:
        theta, weights = _gauss_legendre(order)
        kinetic = np.maximum(energy - upper(centre + half * np.sin(theta)), 0.0)
        return float(np.sum(weights * np.sqrt(2.0 * mass * kinetic) * half * np.cos(theta)))

    order = 64
    previous = quadrature(order)
    while order < max_order:
        order *= 2
        current = quadrature(order)
        if abs(current - previous) <= rtol * abs(current):
            return current
        previous = current
    logger.warning("Action integral not converged to %.1e at quadrature order %d", rtol, order)
    return previous


def arg_gamma_imaginary(y: float, high_precision: bool = False) -> Union[float, Expr]:
    """
    arg Gamma(i y) on the branch continuous in y > 0, tending to -pi/2 as y -> 0.

    Parameters
    ----------
    y : float
        Positive real number.
    high_precision : bool, optional
        Evaluate with SymPy to 50 significant digits (returns a SymPy Float). Default False.

    Returns
    -------
    float or sympy.core.expr.Expr
        arg Gamma(i y).

    """

    if high_precision:
        return N(im(sym_loggamma(I * Rational(y))), 50)
    return float(np.imag(loggamma(1j * y)))


def stokes_phase(delta: float, high_precision: bool = False) -> Union[float, Expr]:
    """
    Stokes phase phi_s = y ln y - y - arg Gamma(i y) - pi/4 with y = delta / pi.

    phi_s tends to pi/4 as delta -> 0 and to 0 as delta -> infinity.

    """

    if high_precision:
        y_exact = Rational(delta) / sym_pi
        return N(
            y_exact * log(y_exact) - y_exact - im(sym_loggamma(I * y_exact)) - sym_pi / 4, 50
        )
    y = delta / np.pi
    return float(y * np.log(y) - y - arg_gamma_imaginary(y) - 0.25 * np.pi)


@dataclass(frozen=True)
class ZnParameters:
    """
    Zhu-Nakamura parameters at one energy.

    ``psi_over_pi`` is stored rather than Psi so that complete reflection at half-integer values
    is evaluated without rounding.

    Parameters
    ----------
    energy : float
        Total energy E (hartree).
    alpha, beta, gamma : float
        Geometry and energy parameters.
    delta, f, phi_s, sigma, g : float
        Auxiliary quantities; ``phi_s`` and ``sigma`` in radians.
    p : float
        Nonadiabatic transition probability for one passage, in (0, 1).
    psi_over_pi : float
        Psi / pi with Psi = sigma - phi_s - g.

    """

    # pylint: disable=too-many-instance-attributes

    energy: float
    alpha: float
    beta: float
    gamma: float
    delta: float
    f: float
    phi_s: float
    sigma: float
    g: float
    p: float
    psi_over_pi: float

    @property
    def psi(self) -> float:
        """Phase Psi (radians)."""
        return self.psi_over_pi * np.pi

    def transmission(self) -> float:
        """Overall transmission probability through the crossing."""
        return transmission(self)


def nonadiabatic_probability(alpha: float, beta: float) -> float:
    """
    One-passage nonadiabatic transition probability
    p = exp(-pi / (4 sqrt(alpha beta)) sqrt(2 / (1 + sqrt(1 - f / beta^2)))).

    p grows with both alpha and beta and tends to 1 in the diabatic limit.

    Raises
    ------
    ZnDomainError
        If alpha <= 0, beta <= 1 or 1 - f / beta^2 < 0.

    Examples
    --------
    >>> p = rf.zhunakamura.nonadiabatic_probability(0.5, 4.0)
    >>> 0.0 < p < 1.0
    True

    """

    if not alpha > 0.0:
        raise ZnDomainError(f"alpha must be positive, got {alpha}.")
    if not beta > 1.0:
        raise ZnDomainError(f"beta = {beta:.6g} must exceed 1.")
    f = 0.72 - 0.62 * alpha**0.715
    radicand = 1.0 - f / beta**2
    if radicand < 0.0:
        raise ZnDomainError(
            f"1 - f / beta^2 = {radicand:.6g} < 0 (alpha = {alpha:.6g}, beta = {beta:.6g}, "
            f"f = {f:.6g})."
        )
    return math.exp(
        -np.pi / (4.0 * math.sqrt(alpha * beta)) * math.sqrt(2.0 / (1.0 + math.sqrt(radicand)))
    )


def zn_assemble(
    features: CrossingFeatures,
    energy: float,
    sigma: Optional[float] = None,
) -> ZnParameters:
    """
    Evaluate the Zhu-Nakamura parameters of a crossing at total energy ``energy``.

    Parameters
    ----------
    features : CrossingFeatures
        Crossing geometry from ``extract_features()``.
    energy : float
        Total energy (hartree) on the dressed pair's scale.
    sigma : float or None, optional
        Action integral, if already known. Computed with ``action_sigma()`` otherwise.

    Returns
    -------
    ZnParameters
        All parameters at ``energy``.

    Raises
    ------
    ZnDomainError
        If alpha <= 0, beta <= 1 (energy not above E_b), or 1 - f / beta^2 < 0.

    """

    alpha = features.alpha
    if not alpha > 0.0:
        raise ZnDomainError(f"alpha must be positive, got {alpha}.")
    half_gap = 0.5 * (features.e_b - features.e_t)
    beta = (energy - 0.5 * (features.e_b + features.e_t)) / half_gap
    if not beta > 1.0:
        raise ZnDomainError(
            f"beta = {beta:.6g} <= 1: E = {energy:.10g} Ha is not above E_b = {features.e_b:.10g} Ha."
        )

    f = 0.72 - 0.62 * alpha**0.715
    p = nonadiabatic_probability(alpha, beta)
    root_ab = math.sqrt(alpha * beta)

    s = math.sqrt(1.0 - beta**-2)
    delta = np.pi / (16.0 * root_ab) * math.sqrt(6.0 + 10.0 * s) / (1.0 + s)

    if sigma is None:
        sigma = action_sigma(
            features.pair.upper,
            energy,
            features.mass,
            features.x_b,
            bounds=features.pair.domain,
        )
    quarter = alpha**0.25
    g = 0.23 * quarter / (quarter + 0.75) * 40.0 ** (-sigma)
    phi_s = float(stokes_phase(delta))
    psi = sigma - phi_s - g

    return ZnParameters(
        energy=energy,
        alpha=alpha,
        beta=beta,
        gamma=features.gamma,
        delta=delta,
        f=f,
        phi_s=phi_s,
        sigma=sigma,
        g=g,
        p=p,
        psi_over_pi=psi / np.pi,
    )


def transmission_probability(psi_over_pi: float, p: float) -> float:
    """
    P = 4 cos^2 Psi / (4 cos^2 Psi + p^2 / (1 - p)).

    cos^2 Psi is evaluated as sin^2 of pi times the distance of Psi / pi from the nearest
    half-integer, so P is exactly zero at Psi = (n + 1/2) pi.

    Parameters
    ----------
    psi_over_pi : float
        Psi / pi.
    p : float
        One-passage nonadiabatic transition probability, in [0, 1].

    Returns
    -------
    float
        Transmission probability in [0, 1].

    Examples
    --------
    >>> rf.transmission_probability(2.5, 0.3)
    0.0
    >>> rf.transmission_probability(0.0, 0.5)
    0.8888888888888888

    """

    offset = psi_over_pi - 0.5
    cos2 = math.sin(np.pi * (offset - round(offset))) ** 2
    if cos2 == 0.0 or p >= 1.0:
        return 0.0
    if p <= 0.0:
        return 1.0
    return 4.0 * cos2 / (4.0 * cos2 + p * p / (1.0 - p))


def transmission(params: ZnParameters) -> float:
    """Overall transmission probability for a set of Zhu-Nakamura parameters."""

    return transmission_probability(params.psi_over_pi, params.p)


class ManifoldRoot(NamedTuple):
    """Complete reflection point Psi_v(omega_n) = (n + 1/2) pi."""

    n: int
    omega: float
    psi_over_pi: float
    transmission: float


@dataclass
class ManifoldCurve:
    """
    Sampled complete reflection manifold Psi_v(omega) / pi of one excited channel.

    Samples that fall outside the domain of the formulas are NaN in ``psi_over_pi``,
    ``transmission`` and ``p``, and are grouped into ``gaps``.

    Parameters
    ----------
    curves : CurveSet
        Source curves.
    channel : int
        Excited channel.
    v : int
        Vibrational level of the ground state.
    e_v : float
        Level energy (hartree).
    field_amplitude : float
        Peak field F0 (a.u.).
    omega : numpy.ndarray
        Sampled photon energies (hartree).
    psi_over_pi, transmission, p : numpy.ndarray
        Manifold, transmission probability and one-passage probability per sample.
    gaps : list
        ``(omega_first, omega_last, reason)`` for every run of invalid samples.
    roots : list
        Located ``ManifoldRoot`` entries, ordered by omega.

    """

    # pylint: disable=too-many-instance-attributes

    curves: CurveSet = field(repr=False)
    channel: int
    v: int
    e_v: float
    field_amplitude: float
    omega: np.ndarray = field(repr=False)
    psi_over_pi: np.ndarray = field(repr=False)
    transmission: np.ndarray = field(repr=False)
    p: np.ndarray = field(repr=False)
    gaps: list[tuple[float, float, str]] = field(default_factory=list)
    roots: list[ManifoldRoot] = field(default_factory=list)

    @property
    def valid(self) -> np.ndarray:
        """Boolean mask of samples inside the domain of the formulas."""
        return np.isfinite(self.psi_over_pi)

    def evaluate(self, omega: float) -> ZnParameters:
        """Zhu-Nakamura parameters at photon energy ``omega`` (hartree)."""

        pair = dress(self.curves, self.channel, omega, self.field_amplitude)
        return zn_assemble(extract_features(pair), self.e_v + omega)

    def to_frame(self) -> pd.DataFrame:
        """Valid samples as columns ``omega_eV, psi_over_pi, P``."""

        mask = self.valid
        return pd.DataFrame(
            {
                "omega_eV": self.omega[mask] / EV,
                "psi_over_pi": self.psi_over_pi[mask],
                "P": self.transmission[mask],
            }
        )

    def roots_frame(self) -> pd.DataFrame:
        """Roots as columns ``n, omega_eV, psi_over_pi, P``."""

        return pd.DataFrame(
            {
                "n": [r.n for r in self.roots],
                "omega_eV": [r.omega / EV for r in self.roots],
                "psi_over_pi": [r.psi_over_pi for r in self.roots],
                "P": [r.transmission for r in self.roots],
            }
        )

    def gap_comments(self) -> list[str]:
        """One comment line per gap interval, in eV."""

        return [
            f"gap: omega_eV {start / EV:.9f} to {stop / EV:.9f} ({reason})"
            for start, stop, reason in self.gaps
        ]


def _find_roots(curve: ManifoldCurve, xtol: float) -> list[ManifoldRoot]:
    roots = []
    omega, psi = curve.omega, curve.psi_over_pi
    for j in range(len(omega) - 1):
        lo, hi = psi[j], psi[j + 1]
        if not (np.isfinite(lo) and np.isfinite(hi)):
            continue
        for n in range(math.ceil(min(lo, hi) - 0.5), math.floor(max(lo, hi) - 0.5) + 1):
            if n < 0:
                continue
            target = n + 0.5

            def offset(w: float, target: float = target) -> float:
                return curve.evaluate(w).psi_over_pi - target

            try:
                if lo == target:
                    w_n = float(omega[j])
                elif hi == target:
                    w_n = float(omega[j + 1])
                else:
                    w_n = float(brentq(offset, omega[j], omega[j + 1], xtol=xtol))
                params = curve.evaluate(w_n)
            except ReflectalError as err:
                logger.warning(
                    "Root n=%d of channel %d between %.9g and %.9g Ha not refined: %s",
                    n,
                    curve.channel,
                    omega[j],
                    omega[j + 1],
                    err,
                )
                continue
            if roots and roots[-1].n == n and abs(roots[-1].omega - w_n) <= 10 * xtol:
                continue
            roots.append(ManifoldRoot(n, w_n, params.psi_over_pi, transmission(params)))
    return roots


def manifold(
    curves: CurveSet,
    channel: int,
    v: int,
    e_v: float,
    omega_range: tuple[float, float],
    nsamples: int = 2000,
    field_amplitude: float = 5.34e-3,
    xtol: float = 1.0e-13,
) -> ManifoldCurve:
    """
    Sample the complete reflection manifold Psi_v(omega) of one channel and locate its roots.

    For each sampled photon energy the ground state is dressed, the crossing geometry extracted,
    and the Zhu-Nakamura parameters evaluated at E = E_v + omega. Samples outside the domain of
    the formulas are recorded as gaps. Roots of Psi - (n + 1/2) pi bracketed by adjacent valid
    samples are refined with Brent's method.

    Parameters
    ----------
    curves : CurveSet
        Curve set.
    channel : int
        Excited channel, 2, 3 or 4.
    v : int
        Vibrational level.
    e_v : float
        Energy of level v (hartree).
    omega_range : tuple
        First and last photon energy (hartree).
    nsamples : int, optional
        Number of samples. Default 2000.
    field_amplitude : float, optional
        Peak field F0 (a.u.). Default 5.34e-3 (1 TW/cm2).
    xtol : float, optional
        Absolute tolerance on root frequencies (hartree). Default 1e-13.

    Returns
    -------
    ManifoldCurve
        Samples, gaps and roots.

    Raises
    ------
    EmptyWindowError
        If no sample is valid.

    """

    # pylint: disable=too-many-arguments, too-many-locals
    omega = np.linspace(omega_range[0], omega_range[1], nsamples)
    psi = np.full(nsamples, np.nan)
    prob = np.full(nsamples, np.nan)
    p = np.full(nsamples, np.nan)
    gaps: list[tuple[float, float, str]] = []
    gap_start: Optional[int] = None
    gap_reason = ""

    curve = ManifoldCurve(curves, channel, v, e_v, field_amplitude, omega, psi, prob, p)
    for j, w in enumerate(omega):
        try:
            params = curve.evaluate(float(w))
        except ReflectalError as err:
            logger.debug("Channel %d, omega %.9g Ha: %s", channel, w, err)
            if gap_start is None:
                gap_start, gap_reason = j, type(err).__name__
            continue
        if gap_start is not None:
            gaps.append((float(omega[gap_start]), float(omega[j - 1]), gap_reason))
            gap_start = None
        psi[j], p[j], prob[j] = params.psi_over_pi, params.p, transmission(params)
    if gap_start is not None:
        gaps.append((float(omega[gap_start]), float(omega[-1]), gap_reason))

    if not np.any(np.isfinite(psi)):
        raise EmptyWindowError(
            f"No valid sample for channel {channel}, v={v} between {omega_range[0]:.6g} and "
            f"{omega_range[1]:.6g} Ha."
        )
    for start, stop, reason in gaps:
        logger.warning(
            "Channel %d, v=%d: gap %.6f-%.6f eV (%s)", channel, v, start / EV, stop / EV, reason
        )

    curve.gaps = gaps
    curve.roots = _find_roots(curve, xtol)
    logger.info(
        "Channel %d, v=%d: %d roots at %s eV",
        channel,
        v,
        len(curve.roots),
        ", ".join(f"{r.omega / EV:.6f}" for r in curve.roots),
    )
    return curve


class ControlFrequency(NamedTuple):
    """Photon energy at which two manifold roots align."""

    omega: float
    quality: float
    n_first: int
    n_second: int
    omega_first: float
    omega_second: float


def find_control_frequency(
    manifolds: Sequence[ManifoldCurve], tolerance: float
) -> list[ControlFrequency]:
    """
    Photon energies at which roots of two manifolds (normally channels 2 and 4, both H + I) lie
    within ``tolerance`` of each other.

    Parameters
    ----------
    manifolds : Sequence[ManifoldCurve]
        The two manifolds, computed for the same vibrational level.
    tolerance : float
        Largest root separation accepted (hartree).

    Returns
    -------
    list
        ``ControlFrequency`` entries at the midpoint of each aligned root pair, with quality the
        summed predicted transmission P_first + P_second there, sorted by quality ascending.
        Empty when no pair aligns.

    """

    first, second = manifolds
    found = []
    for r1 in first.roots:
        for r2 in second.roots:
            if abs(r1.omega - r2.omega) > tolerance:
                continue
            midpoint = 0.5 * (r1.omega + r2.omega)
            try:
                quality = transmission(first.evaluate(midpoint)) + transmission(
                    second.evaluate(midpoint)
                )
            except ReflectalError as err:
                logger.warning("Aligned roots at %.9g Ha not evaluable: %s", midpoint, err)
                continue
            found.append(ControlFrequency(midpoint, quality, r1.n, r2.n, r1.omega, r2.omega))
    return sorted(found, key=lambda c: (c.quality, c.omega))


TUNABLE_PARAMETERS = ("a4", "b4")


class AlignedSurrogate(NamedTuple):
    """Surrogate parameters for which a channel 2 and a channel 4 root coincide."""

    params: SurrogateParameters
    control: ControlFrequency
    first: ManifoldCurve
    second: ManifoldCurve


def _alignment_candidates(
    psi_at: Callable[[float], float], values: np.ndarray
) -> list[tuple[int, float]]:
    """``(n, x)`` where ``psi_at(x)`` crosses n + 1/2 between adjacent ``values``."""

    psi = np.full(len(values), np.nan)
    for j, x in enumerate(values):
        try:
            psi[j] = psi_at(float(x))
        except ReflectalError:
            continue
    found = []
    for j in range(len(values) - 1):
        lo, hi = psi[j], psi[j + 1]
        if not (np.isfinite(lo) and np.isfinite(hi)):
            continue
        for n in range(max(math.ceil(min(lo, hi) - 0.5), 0), math.floor(max(lo, hi) - 0.5) + 1):
            try:
                x_n = brentq(
                    lambda x, n=n: psi_at(x) - (n + 0.5),
                    values[j],
                    values[j + 1],
                    xtol=1.0e-14 * values[j],
                )
            except (ReflectalError, ValueError) as err:
                logger.debug(
                    "Bracket %.9g-%.9g for n=%d lost: %s", values[j], values[j + 1], n, err
                )
                continue
            found.append((n, float(x_n)))
    return found


def align_surrogate(
    v: int,
    e_v: float,
    omega_range: tuple[float, float],
    params: Optional[SurrogateParameters] = None,
    parameter: str = "a4",
    scale_range: tuple[float, float] = (0.4, 2.5),
    nscan: int = 32,
    nsamples: int = 2000,
    field_amplitude: float = 5.34e-3,
    tolerance: float = 1.0e-3 * EV,
    xtol: float = 1.0e-13,
) -> AlignedSurrogate:
    """
    Tune one channel 4 shape parameter of the surrogate until a root of the channel 4 manifold
    falls on a root of the channel 2 manifold, so that both H + I channels are blocked at once.

    For every channel 2 root omega_n, Psi_4(omega_n) / pi is sampled over ``parameter`` scaled
    by ``scale_range`` (log spaced), and crossings of a half-integer are refined with Brent's
    method. Candidates are tried closest to the starting value first; the first one whose
    channel 4 manifold yields an aligned pair in ``find_control_frequency()`` is returned.

    Parameters
    ----------
    v : int
        Vibrational level.
    e_v : float
        Energy of level v (hartree).
    omega_range : tuple
        First and last photon energy (hartree).
    params : SurrogateParameters or None, optional
        Starting parameters. Defaults to ``SurrogateParameters()``.
    parameter : str, optional
        Parameter to tune, ``a4`` (amplitude) or ``b4`` (exponent). Default ``a4``.
    scale_range : tuple, optional
        Smallest and largest factor applied to the starting value. Default (0.4, 2.5).
    nscan : int, optional
        Number of scanned values. Default 32.
    nsamples : int, optional
        Number of samples of each manifold. Default 2000.
    field_amplitude : float, optional
        Peak field F0 (a.u.). Default 5.34e-3 (1 TW/cm2).
    tolerance : float, optional
        Root separation accepted by ``find_control_frequency()`` (hartree). Default 1 meV.
    xtol : float, optional
        Absolute tolerance on root frequencies (hartree). Default 1e-13.

    Returns
    -------
    AlignedSurrogate
        Tuned parameters, the aligned control frequency and both manifolds.

    Raises
    ------
    AlignmentError
        If ``parameter`` is not tunable, channel 2 has no root in the window, or no value in
        the scanned range aligns a channel 4 root.
    EmptyWindowError
        If channel 2 has no valid sample in the window.

    Examples
    --------
    >>> curves = rf.surrogate_hi()
    >>> grid = rf.make_grid(1.5, 10.0, 1024)
    >>> e_4 = rf.eigensolve(curves.potentials[0], curves.mass, grid, 5)[4].energy
    >>> window = (rf.convert(3.0, "eV", "hartree"), rf.convert(4.6, "eV", "hartree"))
    >>> aligned = rf.align_surrogate(4, e_4, window, nsamples=200)
    >>> aligned.control.quality < 1e-4
    True

    """

    # pylint: disable=too-many-arguments, too-many-locals
    if parameter not in TUNABLE_PARAMETERS:
        raise AlignmentError(f"Parameter must be one of {TUNABLE_PARAMETERS}, got {parameter!r}.")
    params = params if params is not None else SurrogateParameters()
    start = float(getattr(params, parameter))
    first = manifold(surrogate_hi(params), 2, v, e_v, omega_range, nsamples, field_amplitude, xtol)
    if not first.roots:
        raise AlignmentError(f"Channel 2 has no root for v={v} in the window.")

    values = start * np.geomspace(scale_range[0], scale_range[1], nscan)
    candidates = []
    for root in first.roots:

        def psi_at(x: float, omega: float = root.omega) -> float:
            curves = surrogate_hi(params.override(**{parameter: x}))
            pair = dress(curves, 4, omega, field_amplitude)
            return zn_assemble(extract_features(pair), e_v + omega).psi_over_pi

        for n, x_n in _alignment_candidates(psi_at, values):
            candidates.append((abs(math.log(x_n / start)), x_n, n, root))

    for _, x_n, n, root in sorted(candidates, key=lambda c: c[0]):
        tuned = params.override(**{parameter: x_n})
        try:
            second = manifold(
                surrogate_hi(tuned), 4, v, e_v, omega_range, nsamples, field_amplitude, xtol
            )
        except ReflectalError as err:
            logger.debug("%s = %.12g: %s", parameter, x_n, err)
            continue
        for control in find_control_frequency((first, second), tolerance):
            if control.omega_first == root.omega and control.n_second == n:
                logger.info(
                    "v=%d: %s = %.12g aligns ch2 n=%d and ch4 n=%d at %.6f eV (P = %.3g)",
                    v,
                    parameter,
                    x_n,
                    root.n,
                    n,
                    control.omega / EV,
                    control.quality,
                )
                return AlignedSurrogate(tuned, control, first, second)
        logger.debug("%s = %.12g: root n=%d not resolved by the manifold", parameter, x_n, n)

    raise AlignmentError(
        f"No {parameter} in {values[0]:.6g}-{values[-1]:.6g} aligns a channel 4 root with a "
        f"channel 2 root for v={v}."
    )
