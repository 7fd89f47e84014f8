"""CSV export of per-cycle Monte Carlo events."""
from __future__ import annotations

import csv
from typing import Sequence

from nanomis.cycle.montecarlo import CycleOutcome
from nanomis.utils import format_float
from nanomis.utils import make_parent_dirs

EVENT_LOG_COLUMNS = (
    'pulse_index',
    'loaded',
    'emitted',
    'emission_time_ns',
    'phase',
)


def write_event_log(events: Sequence[CycleOutcome], path: str) -> None:
    """Write one row per cycle.

    Cycles without a photon have an empty time and phase.
    """
    make_parent_dirs(path)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(EVENT_LOG_COLUMNS)
        for index, event in enumerate(events):
            writer.writerow(
                [
                    index,
                    int(event.electron_loaded),
                    int(event.photon_emitted),
                    ''
                    if event.emission_time is None
                    else format_float(event.emission_time),
                    ''
                    if event.emission_phase is None
                    else event.emission_phase.value,
                ],
            )
