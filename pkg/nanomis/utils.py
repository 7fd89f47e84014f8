"""Output formatting and file helpers shared by the commands."""
from __future__ import annotations

import dataclasses
import datetime
import enum
import json
import math
import os
from typing import Any

import numpy as np

SCHEMA_VERSION = '1'
"""Version of the JSON and CSV result layouts."""

SIGNIFICANT_DIGITS = 12


def round_significant(value: float, digits: int = SIGNIFICANT_DIGITS) -> float:
    """Round a float to a number of significant digits.

    Example:
        ```python
        >>> round_significant(1 / 3, 4)
        0.3333
        ```
    """
    if value == 0 or not math.isfinite(value):
        return value
    return float(f'{value:.{digits}g}')


def format_float(value: float, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Format a float for a CSV cell with fixed significant digits."""
    if math.isnan(value):
        return 'nan'
    return f'{value:.{digits}g}'


def to_serializable(obj: Any) -> Any:
    """Convert results to JSON-compatible builtins.

    Dataclasses become dictionaries, enums their values, tuples and arrays
    lists. Floats are rounded to `SIGNIFICANT_DIGITS` and non-finite
    floats become `None`.
    """
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            field.name: to_serializable(getattr(obj, field.name))
            for field in dataclasses.fields(obj)
        }
    if isinstance(obj, enum.Enum):
        return to_serializable(obj.value)
    if isinstance(obj, dict):
        return {str(k): to_serializable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_serializable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_serializable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return round_significant(value) if math.isfinite(value) else None
    return obj


def write_json(document: dict[str, Any], path: str) -> None:
    """Write a result document stamped with the schema version and time.

    Args:
        document: Result fields.
        path: Destination file. Parent directories are created.
    """
    data = {
        'schema_version': SCHEMA_VERSION,
        'generated_at': datetime.datetime.now(
            datetime.timezone.utc,
        ).isoformat(),
    }
    data.update(to_serializable(document))
    make_parent_dirs(path)
    with open(path, 'w') as f:
        json.dump(data, f, indent=4, allow_nan=False)
        # Add newline so cat on the file looks better
        f.write('\n')


def make_parent_dirs(path: str) -> None:
    """Create the parent directory of a file if needed."""
    parent = os.path.dirname(path)
    if parent != '':
        os.makedirs(parent, exist_ok=True)


def bias_label(gate_bias: float) -> str:
    """File name fragment for a gate bias.

    Example:
        ```python
        >>> bias_label(2.5)
        '2.5000V'
        ```
    """
    return f'{gate_bias:.4f}V'
