"""`nanomis` command-line interface.

Every command takes an optional run configuration file. Without one the
file named by the `NANOMIS_CONFIG` environment variable is used, and
without that the bundled reference device with default settings.
Logs are written to stderr.
"""
from __future__ import annotations

import logging
import sys

import click

import nanomis
from nanomis.commands import characterize_command
from nanomis.commands import cycle_command
from nanomis.commands import solve_command
from nanomis.commands import sweep_command
from nanomis.commands import zeeman_command
from nanomis.config import CONFIG_ENV_VAR


class _CLIFormatter(logging.Formatter):
    """Custom format for CLI printing.

    Source: https://stackoverflow.com/questions/1343227
    """

    grey = '\x1b[0;30m'
    red = '\x1b[0;31m'
    green = '\x1b[0;32m'
    yellow = '\x1b[0;33m'
    cyan = '\x1b[0;36m'
    bold_red = '\x1b[1;31m'
    reset = '\x1b[0m'

    FORMATS = {
        logging.DEBUG: f'{cyan}DEBUG:{reset} %(message)s',
        logging.INFO: f'{green}INFO:{reset} %(message)s',
        logging.WARNING: f'{yellow}WARNING:{reset} %(message)s',
        logging.ERROR: f'{red}ERROR:{reset} %(message)s',
        logging.CRITICAL: f'{bold_red}CRITICAL:{reset} %(message)s',
    }

    def format(self, record: logging.LogRecord) -> str:  # pragma: no cover
        formatter = logging.Formatter(self.FORMATS[record.levelno])
        return formatter.format(record)


config_argument = click.argument(
    'config',
    metavar='CONFIG',
    required=False,
    envvar=CONFIG_ENV_VAR,
    type=click.Path(dir_okay=False),
)
output_option = click.option(
    '--output-dir',
    default=None,
    metavar='DIR',
    help='Directory for result files. Overrides the configuration.',
)


@click.group()
@click.option(
    '--log-level',
    default='INFO',
    type=click.Choice(
        ['ERROR', 'WARNING', 'INFO', 'DEBUG'],
        case_sensitive=False,
    ),
    help='Minimum logging level.',
)
@click.pass_context
def cli(ctx: click.Context, log_level: str) -> None:
    """Simulate a nanoscale MIS capacitor single-photon source."""
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(_CLIFormatter())
    logging.basicConfig(level=log_level, handlers=[handler])
    ctx.ensure_object(dict)
    ctx.obj['LOG_LEVEL'] = log_level


@cli.command(name='help')
def show_help() -> None:
    """Show available commands and options."""
    with click.Context(cli) as ctx:
        click.echo(cli.get_help(ctx))


@cli.command()
def version() -> None:
    """Show the nanomis version."""
    click.echo(f'nanomis v{nanomis.__version__}')


@cli.command()
@config_argument
@click.option(
    '--vgate-V',
    'vgate',
    required=True,
    type=float,
    metavar='VOLTS',
    help='Gate bias.',
)
@output_option
def solve(config: str | None, vgate: float, output_dir: str | None) -> None:
    """Solve the electrostatics at one gate bias."""
    raise SystemExit(solve_command(config, vgate, output_dir=output_dir))


@cli.command()
@config_argument
@click.option(
    '--from-V',
    'start',
    type=float,
    metavar='VOLTS',
    help='First gate bias.',
)
@click.option(
    '--to-V',
    'stop',
    type=float,
    metavar='VOLTS',
    help='Last gate bias.',
)
@click.option('--steps', type=int, help='Number of gate biases.')
@click.option(
    '--workers',
    default=1,
    type=int,
    metavar='COUNT',
    help='Threads solving sweep points independently.',
)
@output_option
def sweep(
    config: str | None,
    start: float | None,
    stop: float | None,
    steps: int | None,
    workers: int,
    output_dir: str | None,
) -> None:
    """Sweep the gate bias and tabulate the dot."""
    raise SystemExit(
        sweep_command(
            config,
            start,
            stop,
            steps,
            output_dir=output_dir,
            workers=workers,
        ),
    )


@cli.command(name='characterize')
@config_argument
@output_option
def characterize_dot(config: str | None, output_dir: str | None) -> None:
    """Find the alignment and onset biases and characterize the dot."""
    raise SystemExit(characterize_command(config, output_dir=output_dir))


@cli.command()
@config_argument
@click.option(
    '--pulses',
    default=10_000,
    type=int,
    metavar='COUNT',
    help='Number of cycles.',
)
@click.option('--seed', default=None, type=int, help='Random seed.')
@click.option(
    '--trajectories',
    default=1,
    type=int,
    metavar='COUNT',
    help='Independent trajectories the pulses are split into.',
)
@click.option(
    '--workers',
    default=1,
    type=int,
    metavar='COUNT',
    help='Threads simulating trajectories.',
)
@click.option(
    '--pi-pulse/--no-pi-pulse',
    default=False,
    help='Flip the electron spin before recombination.',
)
@click.option(
    '--events/--no-events',
    default=False,
    help='Write the per-cycle event log.',
)
@output_option
def cycle(
    config: str | None,
    pulses: int,
    seed: int | None,
    trajectories: int,
    workers: int,
    pi_pulse: bool,
    events: bool,
    output_dir: str | None,
) -> None:
    """Simulate the pulsed single-photon emission cycle."""
    raise SystemExit(
        cycle_command(
            config,
            pulses,
            seed=seed,
            trajectories=trajectories,
            workers=workers,
            pi_pulse=pi_pulse,
            events=events,
            output_dir=output_dir,
        ),
    )


@cli.command()
@config_argument
@click.option(
    '--b-tesla',
    'b_field',
    default=None,
    type=float,
    metavar='TESLA',
    help='Magnetic field along the growth axis.',
)
@click.option(
    '--pi-pulse/--no-pi-pulse',
    default=False,
    help='Report the state after a pi pulse on the electron.',
)
@output_option
def zeeman(
    config: str | None,
    b_field: float | None,
    pi_pulse: bool,
    output_dir: str | None,
) -> None:
    """Report Zeeman splittings and optical selection rules."""
    raise SystemExit(
        zeeman_command(
            config,
            b_field,
            pi_pulse=pi_pulse,
            output_dir=output_dir,
        ),
    )
