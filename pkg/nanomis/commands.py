"""Simulation commands.

These are the implementations of the commands available via the
[`nanomis`](cli.md) command. All commands log errors and results and
return exit codes (rather than raising errors and returning results).
Result files are written to the configured output directory.
"""
from __future__ import annotations

import csv
import dataclasses
import enum
import logging
import math
import os

import numpy as np

from nanomis.config import load_config
from nanomis.config import RunConfig
from nanomis.cycle.analytic import analytic_efficiency
from nanomis.cycle.analytic import conversion_ratio
from nanomis.cycle.export import write_event_log
from nanomis.cycle.montecarlo import run_monte_carlo
from nanomis.device.exceptions import MeshResourceError
from nanomis.device.mesh import generate_mesh
from nanomis.device.mesh import Mesh
from nanomis.electrostatics.exceptions import AssemblyError
from nanomis.electrostatics.exceptions import NotConvergedError
from nanomis.electrostatics.export import write_band_profile
from nanomis.electrostatics.solver import newton_solve
from nanomis.electrostatics.sweep import bias_sweep
from nanomis.exceptions import ConfigError
from nanomis.qdot.exceptions import BracketError
from nanomis.qdot.exceptions import FitError
from nanomis.qdot.report import characterize
from nanomis.qdot.spectrum import compute_spectrum
from nanomis.timer import Timer
from nanomis.utils import bias_label
from nanomis.utils import format_float
from nanomis.utils import make_parent_dirs
from nanomis.utils import write_json
from nanomis.zeeman import apply_pi_pulse
from nanomis.zeeman import recombination_partner
from nanomis.zeeman import zeeman_report

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = (
    'vgate_V',
    'min_Ec_meV',
    'hbar_omega0_meV',
    'ground_state_meV',
    'n_electrons_estimate',
    'status',
)


class ExitCode(enum.IntEnum):
    """Process exit codes of the commands."""

    SUCCESS = 0
    """The command completed."""
    CONFIG_ERROR = 3
    """The configuration or arguments are invalid."""
    CONVERGENCE_ERROR = 4
    """The electrostatics did not converge."""
    BRACKET_ERROR = 5
    """A bias search bracket did not enclose its target."""


def _setup(
    config_path: str | None,
    output_dir: str | None,
) -> RunConfig | None:
    try:
        config = load_config(config_path)
    except ConfigError as e:
        logger.error(f'Invalid configuration: {e}')
        return None
    if output_dir is not None:
        config.output_dir = output_dir
    return config


def _mesh(config: RunConfig) -> Mesh | None:
    try:
        mesh = generate_mesh(config.device, config.mesh)
    except MeshResourceError as e:
        logger.error(str(e))
        return None
    nr, nz = mesh.shape
    logger.info(f'Generated {nr}x{nz} node mesh')
    return mesh


def solve_command(
    config_path: str | None,
    vgate: float,
    *,
    output_dir: str | None = None,
) -> int:
    """Solve the electrostatics at one gate bias.

    Writes the band profile CSV and a JSON summary.

    Args:
        config_path: Run configuration file.
        vgate: Gate bias (V).
        output_dir: Override of the configured output directory.

    Returns:
        Exit code. Failure messages are logged to the default logger.
    """
    config = _setup(config_path, output_dir)
    if config is None:
        return ExitCode.CONFIG_ERROR
    mesh = _mesh(config)
    if mesh is None:
        return ExitCode.CONFIG_ERROR

    try:
        with Timer() as timer:
            field = newton_solve(mesh, vgate, options=config.solver)
    except AssemblyError as e:
        logger.error(str(e))
        return ExitCode.CONFIG_ERROR

    label = bias_label(vgate)
    profile_path = os.path.join(config.output_dir, f'band_profile_{label}.csv')
    write_band_profile(field, profile_path)
    charges = field.electrode_charges()
    electrons, holes = field.well_sheet_densities()
    summary_path = os.path.join(config.output_dir, f'solve_{label}.json')
    write_json(
        {
            'vgate_V': vgate,
            'converged': field.converged,
            'newton_iterations': field.newton_iterations,
            'residual_norm': field.residual_norm,
            'min_Ec_meV': field.min_conduction_band_edge() * 1e3,
            'n_electrons_estimate': field.electron_count(),
            'sheet_density_cm2': {
                'electrons_axis': electrons[0],
                'electrons_max': electrons.max(),
                'holes_axis': holes[0],
                'holes_edge': holes[-1],
            },
            'electrode_charges_e': charges,
            'mesh_shape': list(mesh.shape),
            'solve_time_s': timer.elapsed_s,
        },
        summary_path,
    )
    logger.info(f'Wrote band profile to {profile_path}')
    logger.info(f'Wrote summary to {summary_path}')

    if not field.converged:
        logger.error(f'Electrostatics did not converge at {vgate} V.')
        return ExitCode.CONVERGENCE_ERROR
    return ExitCode.SUCCESS


def sweep_command(
    config_path: str | None,
    start: float | None = None,
    stop: float | None = None,
    steps: int | None = None,
    *,
    output_dir: str | None = None,
    workers: int = 1,
) -> int:
    """Sweep the gate bias and tabulate the dot at each point.

    Args:
        config_path: Run configuration file.
        start: First bias (V). Defaults to the configured sweep.
        stop: Last bias (V).
        steps: Number of biases.
        output_dir: Override of the configured output directory.
        workers: Threads solving sweep points.

    Returns:
        Exit code. Failure messages are logged to the default logger.
    """
    config = _setup(config_path, output_dir)
    if config is None:
        return ExitCode.CONFIG_ERROR
    start = config.sweep.start if start is None else start
    stop = config.sweep.stop if stop is None else stop
    steps = config.sweep.steps if steps is None else steps
    if steps < 1 or (steps > 1 and not start < stop):
        logger.error(
            f'Invalid sweep from {start} V to {stop} V in {steps} step(s). '
            'Start must be below stop.',
        )
        return ExitCode.CONFIG_ERROR
    mesh = _mesh(config)
    if mesh is None:
        return ExitCode.CONFIG_ERROR

    biases = [start] if steps == 1 else list(np.linspace(start, stop, steps))
    try:
        with Timer() as timer:
            fields = bias_sweep(
                mesh,
                biases,
                config.solver,
                workers=workers,
            )
    except AssemblyError as e:
        logger.error(str(e))
        return ExitCode.CONFIG_ERROR
    logger.info(f'Solved {len(fields)} point(s) in {timer.elapsed_s:.2f} s')

    path = os.path.join(config.output_dir, 'sweep.csv')
    make_parent_dirs(path)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(SWEEP_COLUMNS)
        for bias, field in zip(biases, fields):
            spacing = ground = math.nan
            status = 'ok'
            if not field.converged:
                status = 'not_converged'
            else:
                try:
                    spectrum = compute_spectrum(field)
                except FitError as e:
                    logger.warning(f'No dot spectrum at {bias:.4f} V: {e}')
                    status = 'fit_failed'
                else:
                    spacing = spectrum.hbar_omega0
                    ground = spectrum.ground_state_energy_absolute
            writer.writerow(
                [
                    format_float(float(bias)),
                    format_float(field.min_conduction_band_edge() * 1e3),
                    format_float(spacing),
                    format_float(ground),
                    format_float(field.electron_count()),
                    status,
                ],
            )
    logger.info(f'Wrote sweep table to {path}')

    if not all(field.converged for field in fields):
        return ExitCode.CONVERGENCE_ERROR
    return ExitCode.SUCCESS


def characterize_command(
    config_path: str | None,
    *,
    output_dir: str | None = None,
) -> int:
    """Find the alignment and onset biases and characterize the dot.

    Writes `dot_report.json` even when some quantities fail.

    Args:
        config_path: Run configuration file.
        output_dir: Override of the configured output directory.

    Returns:
        Exit code. Failure messages are logged to the default logger.
    """
    config = _setup(config_path, output_dir)
    if config is None:
        return ExitCode.CONFIG_ERROR
    mesh = _mesh(config)
    if mesh is None:
        return ExitCode.CONFIG_ERROR

    try:
        with Timer() as timer:
            report = characterize(
                mesh,
                alignment_bracket=config.search.alignment_bracket,
                onset_upper=config.search.onset_upper,
                tolerance=config.search.tolerance,
                options=config.search_options(),
                lever_steps=config.search.lever_steps,
                window=config.search.fit_window,
            )
    except AssemblyError as e:
        logger.error(str(e))
        return ExitCode.CONFIG_ERROR
    logger.info(f'Characterized dot in {timer.elapsed_s:.2f} s')

    path = os.path.join(config.output_dir, 'dot_report.json')
    write_json(report.to_dict(), path)
    logger.info(f'Wrote dot report to {path}')

    kinds = set(report.failures.values())
    if NotConvergedError in kinds:
        return ExitCode.CONVERGENCE_ERROR
    if BracketError in kinds:
        return ExitCode.BRACKET_ERROR
    if len(kinds) > 0:
        return ExitCode.CONVERGENCE_ERROR
    return ExitCode.SUCCESS


def cycle_command(
    config_path: str | None,
    pulses: int,
    *,
    seed: int | None = None,
    trajectories: int = 1,
    workers: int = 1,
    pi_pulse: bool = False,
    events: bool = False,
    output_dir: str | None = None,
) -> int:
    """Simulate the pulsed emission cycle.

    Writes `cycle_stats.json` and, with `events`, `cycle_events.csv`.

    Args:
        config_path: Run configuration file.
        pulses: Number of cycles.
        seed: Root seed. Defaults to the configured seed.
        trajectories: Independent trajectories to split the pulses into.
        workers: Threads simulating trajectories.
        pi_pulse: Flip the electron spin before recombination.
        events: Also write the per-cycle event log.
        output_dir: Override of the configured output directory.

    Returns:
        Exit code. Failure messages are logged to the default logger.
    """
    config = _setup(config_path, output_dir)
    if config is None:
        return ExitCode.CONFIG_ERROR
    seed = config.seed if seed is None else seed

    try:
        with Timer() as timer:
            result = run_monte_carlo(
                config.protocol,
                pulses,
                seed,
                trajectories=trajectories,
                workers=workers,
                electron_sz=config.zeeman.zeeman.electron_sz,
                pi_pulse=pi_pulse,
                record_events=events,
            )
    except ValueError as e:
        logger.error(str(e))
        return ExitCode.CONFIG_ERROR
    stats = result.stats
    logger.info(
        f'Simulated {pulses} pulse(s) in {timer.elapsed_s:.2f} s: '
        f'efficiency {stats.efficiency:.5f}, '
        f'{stats.repetition_rate:.4g} MHz',
    )

    protocol = config.protocol
    document = {
        **stats.to_dict(),
        'protocol': protocol,
        'conversion_ratio': conversion_ratio(
            protocol.tau_rad,
            protocol.tau_nonrad,
        ),
        'analytic_efficiency': None
        if protocol.early_emission_enabled
        else analytic_efficiency(protocol),
        'pi_pulse': pi_pulse,
    }
    path = os.path.join(config.output_dir, 'cycle_stats.json')
    write_json(document, path)
    logger.info(f'Wrote cycle statistics to {path}')
    if events:
        events_path = os.path.join(config.output_dir, 'cycle_events.csv')
        write_event_log(result.events, events_path)
        logger.info(f'Wrote event log to {events_path}')
    return ExitCode.SUCCESS


def zeeman_command(
    config_path: str | None,
    b_field: float | None = None,
    *,
    pi_pulse: bool = False,
    output_dir: str | None = None,
) -> int:
    """Report Zeeman splittings and selection rules.

    Args:
        config_path: Run configuration file.
        b_field: Field along the growth axis (T). Defaults to the
            configured field.
        pi_pulse: Report the state after a pi pulse on the electron.
        output_dir: Override of the configured output directory.

    Returns:
        Exit code. Failure messages are logged to the default logger.
    """
    config = _setup(config_path, output_dir)
    if config is None:
        return ExitCode.CONFIG_ERROR
    zeeman = config.zeeman.zeeman
    try:
        if b_field is not None:
            zeeman = dataclasses.replace(zeeman, b_field_z=b_field)
        if pi_pulse:
            electron_sz = apply_pi_pulse(zeeman.electron_sz)
            zeeman = dataclasses.replace(
                zeeman,
                electron_sz=electron_sz,
                hole_sz=recombination_partner(electron_sz),
            )
    except ValueError as e:
        logger.error(str(e))
        return ExitCode.CONFIG_ERROR

    well = config.device.well.material
    transition_energy = well.bandgap + config.zeeman.confinement_energy * 1e-3
    document = zeeman_report(zeeman, transition_energy=transition_energy)
    document['pi_pulse'] = pi_pulse
    document['transition_energy_eV'] = transition_energy
    for warning in document['warnings']:
        logger.warning(warning)

    path = os.path.join(
        config.output_dir,
        f'zeeman_{zeeman.b_field_z:.4f}T.json',
    )
    write_json(document, path)
    logger.info(
        f'Electron splitting {document["electron_splitting_meV"]:.4f} meV '
        f'at {zeeman.b_field_z} T',
    )
    logger.info(f'Wrote Zeeman report to {path}')
    return ExitCode.SUCCESS
