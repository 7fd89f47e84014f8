"""CSV export of solved fields."""
from __future__ import annotations

import csv

import numpy as np

from nanomis.electrostatics.solver import PotentialField
from nanomis.utils import format_float
from nanomis.utils import make_parent_dirs

BAND_PROFILE_COLUMNS = (
    'r_nm',
    'z_nm',
    'V_volts',
    'Ec_eV',
    'Ev_eV',
    'n_e_cm2',
    'p_cm2',
)


def write_band_profile(field: PotentialField, path: str) -> int:
    """Write the potential, band edges and carriers of every node.

    Band edges are `nan` on nodes without semiconductor.

    Args:
        field: Solved field.
        path: Destination CSV file.

    Returns:
        Number of data rows written.
    """
    r, z = np.meshgrid(
        field.mesh.radial_nodes,
        field.mesh.axial_nodes,
        indexing='ij',
    )
    columns = (
        r,
        z,
        field.potential,
        field.conduction_band_edge,
        field.valence_band_edge,
        field.charge.electron_sheet_density,
        field.charge.hole_sheet_density,
    )
    make_parent_dirs(path)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(BAND_PROFILE_COLUMNS)
        rows = zip(*(column.ravel() for column in columns))
        count = 0
        for row in rows:
            writer.writerow([format_float(float(value)) for value in row])
            count += 1
    return count
