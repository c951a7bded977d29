"""
The cli module contains the ``reflectal`` command line interface and the five commands it runs:

* ``eigen``: vibrational levels and eigenstates of the ground state,
* ``manifold``: complete reflection manifolds, their roots and the control frequency report,
* ``align``: a surrogate tuned so that roots of channels 2 and 4 coincide,
* ``scan``: one propagation per photon energy of a range, summarized as I / I* branching,
* ``propagate``: a single propagation and its flux trajectory.

Each command reads a JSON run configuration (see ``reflectal.config``) and writes CSV files
whose first comment line embeds the resolved configuration.

.. code-block:: console

    $ reflectal manifold --config hi.json --out results --workers 4

"""

import argparse
import logging
import multiprocessing
import pathlib
import sys
from typing import Any, Callable, Optional, Sequence

import numpy as np
import pandas as pd

from reflectal import __version__
from reflectal.config import RunConfig
from reflectal.converters import EV
from reflectal.curves import CurveSet
from reflectal.fileio import write_csv
from reflectal.flux import branching
from reflectal.propagation import build_field, propagate
from reflectal.utils import ConfigError, EmptyWindowError, ReflectalError
from reflectal.vibrational import VibrationalState, eigensolve
from reflectal.zhunakamura import (
    ManifoldCurve,
    align_surrogate,
    find_control_frequency,
    manifold,
)

logger = logging.getLogger(__name__)

EXIT_SUCCESS = 0

_SCAN_CONTEXT: dict[str, Any] = {}


def _levels(config: RunConfig, curves: CurveSet) -> list[VibrationalState]:
    return eigensolve(
        lambda r: curves.potential(1, r), curves.mass, config.grid, config.eigen_states
    )


def cmd_eigen(config: RunConfig) -> list[pathlib.Path]:
    """
    Solve for the ground state vibrational levels and write ``levels.csv`` (``v, E_v_eV``) and
    one ``eigenstate_v<v>.csv`` (``R, chi_v(R)``) per level.

    """

    curves = config.build_curves()
    states = _levels(config, curves)
    header = config.resolved()
    written = [
        write_csv(
            config.output / "levels.csv",
            pd.DataFrame(
                {"v": [s.v for s in states], "E_v_eV": [s.energy / EV for s in states]}
            ),
            header,
        )
    ]
    for state in states:
        written.append(
            write_csv(
                config.output / f"eigenstate_v{state.v}.csv",
                state.to_frame(),
                header,
                [f"E_v_hartree = {state.energy:.15g}"],
            )
        )
    logger.info("Wrote %d level files to %s", len(written), config.output)
    return written


def alignment_report(
    curves_by_level: dict[int, dict[int, ManifoldCurve]], tolerance: float
) -> pd.DataFrame:
    """
    Candidate control frequencies per vibrational level.

    Rows with ``dominant == "I*"`` are photon energies at which roots of channels 2 and 4 (both
    H + I) align within ``tolerance``; rows with ``dominant == "I"`` are the roots of channel 3,
    which block the H + I* channel alone. ``predicted_P`` is the summed predicted transmission of
    the blocked channels.

    """

    rows = []
    for v, by_channel in curves_by_level.items():
        if 2 in by_channel and 4 in by_channel:
            for cf in find_control_frequency((by_channel[2], by_channel[4]), tolerance):
                rows.append(
                    {
                        "v": v,
                        "dominant": "I*",
                        "omega_eV": cf.omega / EV,
                        "predicted_P": cf.quality,
                        "blocked": f"ch2 n={cf.n_first}; ch4 n={cf.n_second}",
                        "root_spread_eV": abs(cf.omega_first - cf.omega_second) / EV,
                    }
                )
        if 3 in by_channel:
            for root in by_channel[3].roots:
                rows.append(
                    {
                        "v": v,
                        "dominant": "I",
                        "omega_eV": root.omega / EV,
                        "predicted_P": root.transmission,
                        "blocked": f"ch3 n={root.n}",
                        "root_spread_eV": 0.0,
                    }
                )
    columns = ["v", "dominant", "omega_eV", "predicted_P", "blocked", "root_spread_eV"]
    return pd.DataFrame(rows, columns=columns)


def cmd_manifold(config: RunConfig) -> list[pathlib.Path]:
    """
    Sample the complete reflection manifold of every configured level and channel, and write
    ``manifold_v<v>_ch<i>.csv``, ``roots_v<v>_ch<i>.csv`` and ``alignment.csv``.

    Raises
    ------
    EmptyWindowError
        If any level and channel has no valid sample in the frequency range. Files of the other
        levels and channels are written first.

    """

    scan = config.require_omega_range()
    curves = config.build_curves()
    states = _levels(config, curves)
    header = config.resolved()
    written: list[pathlib.Path] = []
    empty: list[str] = []
    curves_by_level: dict[int, dict[int, ManifoldCurve]] = {}

    for v in config.manifold_levels:
        curves_by_level[v] = {}
        for channel in config.manifold_channels:
            try:
                curve = manifold(
                    curves,
                    channel,
                    v,
                    states[v].energy,
                    (scan.start, scan.stop),
                    config.manifold_samples,
                    config.field_amplitude,
                )
            except EmptyWindowError as err:
                logger.error("%s", err)
                empty.append(f"v={v} ch{channel}")
                continue
            curves_by_level[v][channel] = curve
            comments = [f"E_v_hartree = {states[v].energy:.15g}", *curve.gap_comments()]
            written.append(
                write_csv(
                    config.output / f"manifold_v{v}_ch{channel}.csv",
                    curve.to_frame(),
                    header,
                    comments,
                )
            )
            written.append(
                write_csv(
                    config.output / f"roots_v{v}_ch{channel}.csv",
                    curve.roots_frame(),
                    header,
                    comments,
                )
            )

    report = alignment_report(curves_by_level, config.manifold_tolerance)
    written.append(
        write_csv(
            config.output / "alignment.csv",
            report,
            header,
            [f"tolerance_eV = {config.manifold_tolerance / EV:.6g}"],
        )
    )
    for row in report.itertuples():
        logger.info(
            "v=%d: %s dominant at %.6f eV (blocked %s, predicted P %.3g)",
            row.v,
            row.dominant,
            row.omega_eV,
            row.blocked,
            row.predicted_P,
        )
    if empty:
        raise EmptyWindowError(f"No valid manifold samples for {', '.join(empty)}.")
    return written


def _init_scan_worker(config: RunConfig, curves: CurveSet, initial: VibrationalState) -> None:
    _SCAN_CONTEXT.update(config=config, curves=curves, initial=initial)


def _scan_run(task: tuple[int, float]) -> dict[str, Any]:
    """Propagate at one photon energy and write its trajectory; never raises a library error."""

    index, omega = task
    config: RunConfig = _SCAN_CONTEXT["config"]
    run_file = pathlib.Path("runs") / f"omega_{index:04d}.csv"
    row: dict[str, Any] = {"omega_eV": omega / EV, "run_file": str(run_file)}
    try:
        field = build_field(config.field_spec(omega))
        result = propagate(
            _SCAN_CONTEXT["initial"], _SCAN_CONTEXT["curves"], field, config.propagation
        )
    except (ReflectalError, ArithmeticError, np.linalg.LinAlgError) as err:
        logger.warning("omega = %.6f eV flagged: %s", omega / EV, err)
        row.update(
            {f"J{ch}": np.nan for ch in (2, 3, 4)},
            P_I=np.nan,
            P_Istar=np.nan,
            ratio=np.nan,
            norm=np.nan,
            inner_norm=np.nan,
            absorbed=np.nan,
            balance=np.nan,
            status=f"{type(err).__name__}: {err}",
        )
        return row

    write_csv(
        config.output / run_file,
        result.to_frame(),
        config.resolved(),
        [f"omega_hartree = {omega:.15g}"],
    )
    final = result.record.final
    share = branching(result.record)
    norm = float(result.norms[-1].sum())
    row.update(
        {f"J{ch}": j for ch, j in final.items()},
        P_I=share.p_i,
        P_Istar=share.p_istar,
        ratio=share.ratio,
        norm=norm,
        inner_norm=float(result.inner_norm[-1]),
        absorbed=1.0 - norm,
        balance=float(result.balance[-1]),
        status="ok",
    )
    return row


def cmd_scan(config: RunConfig) -> list[pathlib.Path]:
    """
    Propagate the configured initial level once per photon energy of the range and write the
    per-run trajectories ``runs/omega_<index>.csv``, the summary ``scan_v<v>.csv`` (``omega_eV,
    J2, J3, J4, P_I, P_Istar, ratio``) and the balance diagnostics ``diagnostics_v<v>.csv``.

    Runs are distributed over ``config.workers`` processes; rows are ordered by photon energy,
    so the output does not depend on the worker count. A run that fails is flagged in the
    diagnostics and the scan carries on.

    """

    omegas = config.require_omega_range().values()
    curves = config.build_curves()
    initial = _levels(config, curves)[config.initial_v]
    tasks = list(enumerate(float(w) for w in omegas))
    logger.info(
        "Scanning %d photon energies (%.6f-%.6f eV) with %d worker(s)",
        len(tasks),
        omegas[0] / EV,
        omegas[-1] / EV,
        config.workers,
    )

    if config.workers == 1:
        _init_scan_worker(config, curves, initial)
        rows = [_scan_run(task) for task in tasks]
    else:
        with multiprocessing.Pool(
            config.workers, initializer=_init_scan_worker, initargs=(config, curves, initial)
        ) as pool:
            rows = list(pool.imap(_scan_run, tasks))

    frame = pd.DataFrame(rows)
    header = config.resolved()
    v = config.initial_v
    summary = ["omega_eV", "J2", "J3", "J4", "P_I", "P_Istar", "ratio"]
    diagnostics = ["omega_eV", "run_file", "norm", "inner_norm", "absorbed", "balance", "status"]
    flagged = int((frame["status"] != "ok").sum())
    if flagged:
        logger.warning("%d of %d scan runs flagged; see diagnostics_v%d.csv", flagged, len(rows), v)
    return [
        write_csv(config.output / f"scan_v{v}.csv", frame[summary], header),
        write_csv(
            config.output / f"diagnostics_v{v}.csv",
            frame[diagnostics],
            header,
            [f"flagged = {flagged}"],
        ),
    ]


def cmd_propagate(config: RunConfig) -> list[pathlib.Path]:
    """
    Propagate the configured initial level at the single configured photon energy and write
    ``trajectory.csv``.

    """

    omega = config.require_omega()
    curves = config.build_curves()
    initial = _levels(config, curves)[config.initial_v]
    result = propagate(initial, curves, build_field(config.field_spec(omega)), config.propagation)
    share = branching(result.record)
    logger.info(
        "P_I = %.6g, P_I* = %.6g, P_I*/P_I = %.6g", share.p_i, share.p_istar, share.ratio
    )
    path = write_csv(
        config.output / "trajectory.csv",
        result.to_frame(),
        config.resolved(),
        [
            f"E_v_hartree = {initial.energy:.15g}",
            f"P_I = {share.p_i:.15g}",
            f"P_Istar = {share.p_istar:.15g}",
            f"ratio = {share.ratio:.15g}",
        ],
    )
    return [path]


def cmd_align(config: RunConfig) -> list[pathlib.Path]:
    """
    Tune the channel 4 shape parameter ``manifold.align_parameter`` of the surrogate until a
    channel 4 root meets a channel 2 root for the configured initial level, and write
    ``aligned_v<v>.csv`` (``parameter, value, omega_eV, n_ch2, n_ch4, predicted_P,
    root_spread_eV``). The tuned parameter is repeated as a comment line that can be pasted into
    ``curves.parameters``.

    Raises
    ------
    ConfigError
        If the curves are tabulated rather than the surrogate.
    AlignmentError
        If no value in the searched range aligns the roots.

    """

    if config.surrogate is None:
        raise ConfigError("align tunes the surrogate; set curves.source to 'surrogate'.")
    scan = config.require_omega_range()
    curves = config.build_curves()
    v = config.initial_v
    initial = _levels(config, curves)[v]
    aligned = align_surrogate(
        v,
        initial.energy,
        (scan.start, scan.stop),
        config.surrogate,
        config.align_parameter,
        nsamples=config.manifold_samples,
        field_amplitude=config.field_amplitude,
        tolerance=config.manifold_tolerance,
    )
    control = aligned.control
    value = float(getattr(aligned.params, config.align_parameter))
    frame = pd.DataFrame(
        {
            "parameter": [config.align_parameter],
            "value": [value],
            "omega_eV": [control.omega / EV],
            "n_ch2": [control.n_first],
            "n_ch4": [control.n_second],
            "predicted_P": [control.quality],
            "root_spread_eV": [abs(control.omega_first - control.omega_second) / EV],
        }
    )
    path = write_csv(
        config.output / f"aligned_v{v}.csv",
        frame,
        config.resolved(),
        [
            f"E_v_hartree = {initial.energy:.15g}",
            f'parameters = {{"{config.align_parameter}": {value:.15g}}}',
        ],
    )
    return [path]


COMMANDS: dict[str, Callable[[RunConfig], list[pathlib.Path]]] = {
    "eigen": cmd_eigen,
    "manifold": cmd_manifold,
    "align": cmd_align,
    "scan": cmd_scan,
    "propagate": cmd_propagate,
}


def build_parser() -> argparse.ArgumentParser:
    """Argument parser of the ``reflectal`` command."""

    parser = argparse.ArgumentParser(
        prog="reflectal",
        description="Laser control of HI photodissociation branching by complete reflection.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "eigen": "vibrational levels of the ground state",
        "manifold": "complete reflection manifolds and control frequencies",
        "align": "tune the surrogate so that both H + I channels are blocked at once",
        "scan": "propagations over a photon energy range",
        "propagate": "a single propagation",
    }
    for name, text in helps.items():
        cmd = sub.add_parser(name, help=text)
        cmd.add_argument("--config", required=True, type=pathlib.Path, help="JSON run configuration")
        cmd.add_argument("--out", type=pathlib.Path, help="output directory (overrides the file)")
        cmd.add_argument("--workers", type=int, help="worker processes (overrides the file)")
        cmd.add_argument("-v", "--verbose", action="count", default=0, help="more log output")
        cmd.add_argument("-q", "--quiet", action="store_true", help="errors only")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point of the ``reflectal`` command. Returns the process exit code: 0 on success, 2 on
    a failed precondition, 3 on an empty or degenerate result, 4 on a numerical instability.

    """

    args = build_parser().parse_args(argv)
    if args.quiet:
        level = logging.ERROR
    else:
        level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        config = RunConfig.from_file(args.config, output=args.out, workers=args.workers)
        written = COMMANDS[args.command](config)
    except ReflectalError as err:
        logger.error("%s", err)
        return err.exit_code
    for path in written:
        logger.info("Wrote %s", path)
    return EXIT_SUCCESS


if __name__ == "__main__":
    sys.exit(main())
