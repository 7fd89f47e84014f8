"""Run configuration.

A run configuration is a JSON document with optional sections. Sections
that are absent take their defaults:

```json
{
    "device": "default",
    "mesh": {"well_spacing": 1.0},
    "solver": {"tolerance": 1e-10},
    "sweep": {"start": 2.0, "stop": 3.2, "steps": 13},
    "search": {"alignment_bracket": [1.5, 3.5], "tolerance": 0.05},
    "protocol": {"t1": 10.0, "tau_nonrad": null},
    "zeeman": {"b_field_z": 5.0, "confinement_energy": 12.5},
    "output_dir": "nanomis-output",
    "seed": 20050101
}
```

`device` is `"default"` for the bundled reference device, a path to a
device file relative to the configuration file, or an inline device
section.
"""
from __future__ import annotations

import dataclasses
import json
import logging
import os
from typing import Any

from nanomis.cycle.protocol import DEFAULT_SEED
from nanomis.cycle.protocol import PulseProtocol
from nanomis.device.config import device_from_dict
from nanomis.device.config import read_device_config
from nanomis.device.config import refinement_from_dict
from nanomis.device.mesh import RefinementSpec
from nanomis.device.structure import DeviceSpec
from nanomis.electrostatics.solver import SolverOptions
from nanomis.exceptions import ConfigError
from nanomis.qdot.search import DEFAULT_ALIGNMENT_BRACKET
from nanomis.qdot.search import DEFAULT_TOLERANCE
from nanomis.zeeman import ZeemanConfig

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = 'NANOMIS_CONFIG'
"""Environment variable naming the run configuration file."""

DEFAULT_OUTPUT_DIR = 'nanomis-output'


@dataclasses.dataclass
class SweepConfig:
    """Default gate bias sweep.

    Attributes:
        start: First bias (V).
        stop: Last bias (V).
        steps: Number of biases.
    """

    start: float = 2.0
    stop: float = 3.2
    steps: int = 13

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise ValueError(f'Sweep steps must be >= 1. Got {self.steps}.')
        if self.steps > 1 and not self.start < self.stop:
            raise ValueError('Sweep start must be below stop.')


@dataclasses.dataclass
class SearchConfig:
    """Bias search settings.

    Attributes:
        alignment_bracket: Bracket of the alignment search (V).
        onset_upper: Upper end of the onset bracket (V). Defaults to the
            upper end of the alignment bracket.
        tolerance: Energy tolerance (meV).
        electrons: Electron statistics during searches.
        lever_steps: Sweep steps on each side of the lever arm centre.
        fit_window: Confinement fit window (nm). Automatic if `None`.
    """

    alignment_bracket: tuple[float, float] = DEFAULT_ALIGNMENT_BRACKET
    onset_upper: float | None = None
    tolerance: float = DEFAULT_TOLERANCE
    electrons: str = 'thomas_fermi'
    lever_steps: int = 3
    fit_window: float | None = None

    def __post_init__(self) -> None:
        self.alignment_bracket = (
            float(self.alignment_bracket[0]),
            float(self.alignment_bracket[1]),
        )
        if not self.alignment_bracket[0] < self.alignment_bracket[1]:
            raise ValueError('Alignment bracket must be increasing.')
        if not self.tolerance > 0:
            raise ValueError('Search tolerance must be positive.')
        if self.lever_steps < 1:
            raise ValueError('Lever arm needs at least one step per side.')


@dataclasses.dataclass
class ZeemanRunConfig:
    """Zeeman settings of a run.

    Attributes:
        zeeman: Field, g-factors and spin state.
        confinement_energy: Dot level above the well band gap used for
            the photon energy (meV).
    """

    zeeman: ZeemanConfig = dataclasses.field(default_factory=ZeemanConfig)
    confinement_energy: float = 12.5


@dataclasses.dataclass
class RunConfig:
    """Complete configuration of a run.

    Attributes:
        device: Device description.
        mesh: Mesh refinement.
        solver: Electrostatics solver options.
        sweep: Default bias sweep.
        search: Bias search settings.
        protocol: Emission cycle protocol.
        zeeman: Zeeman settings.
        output_dir: Directory result files are written to.
        seed: Monte Carlo root seed.
    """

    device: DeviceSpec
    mesh: RefinementSpec = dataclasses.field(default_factory=RefinementSpec)
    solver: SolverOptions = dataclasses.field(default_factory=SolverOptions)
    sweep: SweepConfig = dataclasses.field(default_factory=SweepConfig)
    search: SearchConfig = dataclasses.field(default_factory=SearchConfig)
    protocol: PulseProtocol = dataclasses.field(default_factory=PulseProtocol)
    zeeman: ZeemanRunConfig = dataclasses.field(
        default_factory=ZeemanRunConfig,
    )
    output_dir: str = DEFAULT_OUTPUT_DIR
    seed: int = DEFAULT_SEED

    def search_options(self) -> SolverOptions:
        """Solver options used by the bias searches."""
        return self.solver.replace(electrons=self.search.electrons)


def config_from_dict(
    data: dict[str, Any],
    base_dir: str = '.',
) -> RunConfig:
    """Build a run configuration from its dictionary form.

    Args:
        data: Parsed configuration.
        base_dir: Directory relative device paths are resolved against.

    Raises:
        ValueError: If a section or one of its values is invalid.
    """
    known = {field.name for field in dataclasses.fields(RunConfig)}
    unknown = set(data) - known
    if len(unknown) > 0:
        raise ValueError(f'Unknown config sections: {sorted(unknown)}.')
    try:
        return _build_config(data, base_dir)
    except TypeError as e:
        raise ValueError(f'Invalid value in config: {e!s}.') from e


def _build_config(data: dict[str, Any], base_dir: str) -> RunConfig:
    device_data = data.get('device', 'default')
    if device_data == 'default':
        device, refinement = read_device_config()
    elif isinstance(device_data, str):
        device, refinement = read_device_config(
            os.path.join(base_dir, device_data),
        )
    elif isinstance(device_data, dict):
        device = device_from_dict(device_data)
        refinement = refinement_from_dict(device_data.get('mesh', {}))
    else:
        raise ValueError('Device section must be a string or an object.')

    if 'mesh' in data:
        refinement = dataclasses.replace(
            refinement,
            **_section(data, 'mesh', RefinementSpec),
        )

    zeeman_data = dict(data.get('zeeman', {}))
    confinement_energy = float(zeeman_data.pop('confinement_energy', 12.5))

    return RunConfig(
        device=device,
        mesh=refinement,
        solver=SolverOptions(**_section(data, 'solver', SolverOptions)),
        sweep=SweepConfig(**_section(data, 'sweep', SweepConfig)),
        search=SearchConfig(**_section(data, 'search', SearchConfig)),
        protocol=PulseProtocol.from_dict(data.get('protocol', {})),
        zeeman=ZeemanRunConfig(
            zeeman=ZeemanConfig.from_dict(zeeman_data),
            confinement_energy=confinement_energy,
        ),
        output_dir=str(data.get('output_dir', DEFAULT_OUTPUT_DIR)),
        seed=int(data.get('seed', DEFAULT_SEED)),
    )


def _section(data: dict[str, Any], name: str, cls: type) -> dict[str, Any]:
    section = data.get(name, {})
    if not isinstance(section, dict):
        raise ValueError(f'Config section {name} must be an object.')
    fields = {field.name for field in dataclasses.fields(cls)}
    unknown = set(section) - fields
    if len(unknown) > 0:
        raise ValueError(
            f'Unknown keys in config section {name}: {sorted(unknown)}.',
        )
    return section


def read_config(path: str) -> RunConfig:
    """Read a run configuration file.

    Raises:
        FileNotFoundError: If `path` does not exist.
        ValueError: If the file cannot be parsed or is invalid.
    """
    with open(path) as f:
        try:
            data = json.load(f)
        except json.decoder.JSONDecodeError as e:
            raise ValueError(f'Unable to parse ({path}): {e!s}.') from None
    if not isinstance(data, dict):
        raise ValueError(f'Config ({path}) must be a JSON object.')
    return config_from_dict(data, os.path.dirname(os.path.abspath(path)))


def load_config(path: str | None = None) -> RunConfig:
    """Load the run configuration for a command.

    Args:
        path: Configuration file. Falls back to the file named by the
            `NANOMIS_CONFIG` environment variable, then to the defaults.

    Raises:
        ConfigError: If the configuration cannot be read or is invalid.
    """
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR)
    try:
        if path is None:
            logger.debug('No config file given, using defaults')
            return config_from_dict({})
        logger.debug(f'Reading config from {path}')
        return read_config(path)
    except (FileNotFoundError, ValueError) as e:
        raise ConfigError(str(e)) from e
