"""Device and mesh fixtures."""
from __future__ import annotations

import numpy as np
import pytest

from nanomis.device.mesh import generate_mesh
from nanomis.device.mesh import Mesh
from nanomis.device.mesh import REGION_NAMES
from nanomis.device.mesh import RefinementSpec
from nanomis.device.structure import build_default_device
from nanomis.device.structure import DeviceSpec

COARSE_REFINEMENT = RefinementSpec(
    well_spacing=2.0,
    gate_spacing=2.5,
    growth_ratio=1.3,
    max_spacing=50.0,
)
"""Refinement fast enough for the full pipeline in unit tests."""

TINY_REFINEMENT = RefinementSpec(
    well_spacing=5.0,
    gate_spacing=5.0,
    growth_ratio=1.5,
    max_spacing=100.0,
)
"""Refinement for randomized electrostatics checks."""


@pytest.fixture(scope='session')
def default_device() -> DeviceSpec:
    """Reference device."""
    return build_default_device()


@pytest.fixture(scope='session')
def coarse_mesh(default_device: DeviceSpec) -> Mesh:
    """Coarse mesh of the reference device."""
    return generate_mesh(default_device, COARSE_REFINEMENT)


def slab_mesh(
    axial_nodes: np.ndarray,
    cell_permittivity: np.ndarray | float = 1.0,
    *,
    radius: float = 10.0,
    radial_cells: int = 4,
    charged: bool = False,
) -> Mesh:
    """Laterally uniform mesh of a plate capacitor.

    The bottom plane is grounded and the top row of cells is tagged as
    gate so the top plane is the second electrode. Without a device the
    gate sits exactly at the bias.

    Args:
        axial_nodes: Node heights. The last cell becomes the gate.
        cell_permittivity: Permittivity per axial cell below the gate.
        radius: Radius of the slab.
        radial_cells: Number of radial cells.
        charged: Tag the cells below the gate as the charged well region.
    """
    z = np.asarray(axial_nodes, dtype=np.float64)
    r = np.linspace(0, radius, radial_cells + 1)
    eps = np.ones(len(z) - 1) * np.asarray(cell_permittivity)
    eps[-1] = 1.0
    region = 'quantum_well' if charged else 'gate_dielectric'
    tags = np.full(len(z) - 1, REGION_NAMES.index(region), dtype=np.int8)
    tags[-1] = REGION_NAMES.index('gate')
    return Mesh(
        radial_nodes=r,
        axial_nodes=z,
        cell_permittivity=np.tile(eps, (radial_cells, 1)),
        cell_region_tag=np.tile(tags, (radial_cells, 1)),
    )
