"""Device configuration files.

A device file is a JSON document with `materials`, `layers`, `gate`,
`doping`, `mesa` and an optional `mesh` section:

```json
{
    "materials": {"In0.53Ga0.47As": {"bandgap": 0.75, ...}},
    "layers": [
        {"material": "In0.52Al0.48As", "thickness": 50.0,
         "role": "gate_dielectric"},
        ...
    ],
    "gate": {"height": 150.0, "radius": 35.0, "offset": 0.0},
    "doping": {"acceptor_sheet_density": 1e11},
    "mesa": {"side": 1000.0},
    "mesh": {"well_spacing": 1.0, ...}
}
```

The mesa is given either by the `side` of a square mesa, converted to the
radius of the disk with the same area, or directly by its `radius`.
"""
from __future__ import annotations

import dataclasses
import importlib.resources
import json
import os
from typing import Any

from nanomis.device.exceptions import DeviceConfigError
from nanomis.device.materials import MaterialParams
from nanomis.device.mesh import RefinementSpec
from nanomis.device.structure import DeviceSpec
from nanomis.device.structure import Layer
from nanomis.device.structure import mesa_radius_for_square

DEFAULT_DEVICE_FILE = 'default_device.json'


def device_from_dict(data: dict[str, Any]) -> DeviceSpec:
    """Build a device from its dictionary form.

    Raises:
        DeviceConfigError: If a section or key is missing, unexpected or
            invalid.
    """
    try:
        materials = {
            name: MaterialParams(name=name, **params)
            for name, params in data['materials'].items()
        }
        layers = tuple(
            Layer(
                material=materials[layer['material']],
                thickness=float(layer['thickness']),
                role=layer['role'],
            )
            for layer in data['layers']
        )
        gate = data['gate']
        mesa = data['mesa']
        if 'radius' in mesa:
            mesa_radius = float(mesa['radius'])
        else:
            mesa_radius = mesa_radius_for_square(float(mesa['side']))
        return DeviceSpec(
            gate_height=float(gate['height']),
            gate_radius=float(gate['radius']),
            layers=layers,
            acceptor_sheet_density=float(
                data['doping']['acceptor_sheet_density'],
            ),
            mesa_radius=mesa_radius,
            gate_offset=float(gate.get('offset', 0.0)),
            temperature_model=data.get(
                'temperature_model',
                'zero_temperature',
            ),
        )
    except KeyError as e:
        raise DeviceConfigError(
            f'Device config is missing key {e!s}.',
        ) from None
    except TypeError as e:
        raise DeviceConfigError(
            f'Keys in device config do not match expected: {e!s}.',
        ) from None
    except ValueError as e:
        raise DeviceConfigError(str(e)) from e


def device_to_dict(spec: DeviceSpec) -> dict[str, Any]:
    """Dictionary form of a device readable by `device_from_dict()`."""
    materials: dict[str, Any] = {}
    for layer in spec.layers:
        materials[layer.material.name] = layer.material.to_dict()
    return {
        'materials': materials,
        'layers': [
            {
                'material': layer.material.name,
                'thickness': layer.thickness,
                'role': layer.role.value,
            }
            for layer in spec.layers
        ],
        'gate': {
            'height': spec.gate_height,
            'radius': spec.gate_radius,
            'offset': spec.gate_offset,
        },
        'doping': {'acceptor_sheet_density': spec.acceptor_sheet_density},
        'mesa': {'radius': spec.mesa_radius},
        'temperature_model': spec.temperature_model,
    }


def refinement_from_dict(data: dict[str, Any]) -> RefinementSpec:
    """Build mesh refinement controls from a `mesh` section.

    Raises:
        DeviceConfigError: If the section has unknown keys or invalid
            values.
    """
    try:
        return RefinementSpec(**data)
    except TypeError as e:
        raise DeviceConfigError(
            f'Keys in mesh config do not match expected: {e!s}.',
        ) from None
    except ValueError as e:
        raise DeviceConfigError(str(e)) from e


def read_device_config(
    path: str | None = None,
) -> tuple[DeviceSpec, RefinementSpec]:
    """Read a device configuration file.

    Args:
        path: Path to the JSON file. Defaults to the bundled reference
            device.

    Returns:
        The device and the mesh refinement from the `mesh` section, or the
        default refinement if the section is absent.

    Raises:
        FileNotFoundError: If `path` does not exist.
        DeviceConfigError: If the file cannot be parsed or is invalid.
    """
    if path is None:
        resource = importlib.resources.files('nanomis.device').joinpath(
            'data',
            DEFAULT_DEVICE_FILE,
        )
        text = resource.read_text()
        source = DEFAULT_DEVICE_FILE
    else:
        with open(path) as f:
            text = f.read()
        source = path

    try:
        data = json.loads(text)
    except json.decoder.JSONDecodeError as e:
        raise DeviceConfigError(
            f'Unable to parse ({source}): {e!s}.',
        ) from None
    if not isinstance(data, dict):
        raise DeviceConfigError(
            f'Device config ({source}) must be a JSON object.',
        )

    spec = device_from_dict(data)
    refinement = refinement_from_dict(data.get('mesh', {}))
    return spec, refinement


def write_device_config(
    spec: DeviceSpec,
    path: str,
    refinement: RefinementSpec | None = None,
) -> None:
    """Write a device configuration file.

    Args:
        spec: Device to write.
        path: Destination file. Parent directories are created.
        refinement: Optional mesh section to include.
    """
    parent = os.path.dirname(path)
    if parent != '':
        os.makedirs(parent, exist_ok=True)
    data = device_to_dict(spec)
    if refinement is not None:
        data['mesh'] = dataclasses.asdict(refinement)
    with open(path, 'w') as f:
        json.dump(data, f, indent=4)
        # Add newline so cat on the file looks better
        f.write('\n')
