"""Axisymmetric tensor-product mesh of the device.

Nodes sit on a rectilinear grid in `(r, z)`. Each grid cell carries a
permittivity and a region tag. Nodes are indexed `i * nz + k` where `i`
counts radial and `k` axial nodes.
"""
from __future__ import annotations

import dataclasses
import logging
import math
from typing import Callable

import numpy as np
from numpy.typing import NDArray
from scipy import integrate

from nanomis.device.exceptions import MeshResourceError
from nanomis.device.structure import DeviceSpec
from nanomis.device.structure import LayerRole

logger = logging.getLogger(__name__)

REGION_NAMES = (
    'gate',
    'vacuum',
    'gate_dielectric',
    'quantum_well',
    'buffer',
)
"""Cell region names indexed by region tag."""

SEMICONDUCTOR_PRIORITY = ('quantum_well', 'buffer', 'gate_dielectric')
"""Region whose material a node on an interface takes, first match wins."""

_GRADING_SAMPLES = 4097


@dataclasses.dataclass(frozen=True)
class RefinementSpec:
    """Mesh resolution controls.

    Attributes:
        well_spacing: Largest axial spacing inside the quantum well (nm).
        gate_spacing: Largest radial spacing within twice the gate radius
            and axial spacing at the gate footprint (nm).
        growth_ratio: Largest ratio between neighbouring cell sizes away
            from the refined zones.
        max_spacing: Largest spacing anywhere (nm).
        max_nodes: Node count above which generation is refused.
    """

    well_spacing: float = 1.0
    gate_spacing: float = 1.0
    growth_ratio: float = 1.2
    max_spacing: float = 25.0
    max_nodes: int = 250_000

    def __post_init__(self) -> None:
        for field in ('well_spacing', 'gate_spacing', 'max_spacing'):
            value = getattr(self, field)
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f'{field} must be positive. Got {value}.')
        if self.max_spacing < max(self.well_spacing, self.gate_spacing):
            raise ValueError(
                'max_spacing must not be smaller than the refined spacings.',
            )
        if not self.growth_ratio > 1:
            raise ValueError(
                f'growth_ratio must exceed 1. Got {self.growth_ratio}.',
            )
        if self.max_nodes < 4:
            raise ValueError(f'max_nodes is too small ({self.max_nodes}).')


@dataclasses.dataclass(frozen=True, eq=False)
class Mesh:
    """Rectilinear axisymmetric mesh.

    Attributes:
        radial_nodes: Strictly increasing radii starting at zero (nm).
        axial_nodes: Strictly increasing heights (nm).
        cell_permittivity: Relative permittivity per cell with shape
            `(nr - 1, nz - 1)`.
        cell_region_tag: Index into `region_names` per cell.
        region_names: Names of the region tags.
        device: Device the mesh was generated for, if any.
    """

    radial_nodes: NDArray[np.float64]
    axial_nodes: NDArray[np.float64]
    cell_permittivity: NDArray[np.float64]
    cell_region_tag: NDArray[np.int8]
    region_names: tuple[str, ...] = REGION_NAMES
    device: DeviceSpec | None = None

    def __post_init__(self) -> None:
        r = _frozen(np.asarray(self.radial_nodes, dtype=np.float64))
        z = _frozen(np.asarray(self.axial_nodes, dtype=np.float64))
        eps = _frozen(np.asarray(self.cell_permittivity, dtype=np.float64))
        tags = _frozen(np.asarray(self.cell_region_tag, dtype=np.int8))
        if r.ndim != 1 or z.ndim != 1 or len(r) < 2 or len(z) < 2:
            raise ValueError('Mesh needs at least two nodes per direction.')
        if r[0] != 0:
            raise ValueError('Radial nodes must start on the axis.')
        if np.any(np.diff(r) <= 0) or np.any(np.diff(z) <= 0):
            raise ValueError('Mesh nodes must be strictly increasing.')
        shape = (len(r) - 1, len(z) - 1)
        if eps.shape != shape or tags.shape != shape:
            raise ValueError(
                f'Cell arrays must have shape {shape}. Got permittivity '
                f'{eps.shape} and tags {tags.shape}.',
            )
        if np.any(tags < 0) or np.any(tags >= len(self.region_names)):
            raise ValueError('Cell region tag out of range.')
        if np.any(~np.isfinite(eps)) or np.any(eps <= 0):
            raise ValueError('Cell permittivities must be positive.')
        object.__setattr__(self, 'radial_nodes', r)
        object.__setattr__(self, 'axial_nodes', z)
        object.__setattr__(self, 'cell_permittivity', eps)
        object.__setattr__(self, 'cell_region_tag', tags)
        object.__setattr__(self, 'region_names', tuple(self.region_names))

    @property
    def shape(self) -> tuple[int, int]:
        """Number of radial and axial nodes."""
        return (len(self.radial_nodes), len(self.axial_nodes))

    @property
    def node_count(self) -> int:
        """Total number of nodes."""
        return self.shape[0] * self.shape[1]

    def region_mask(self, name: str) -> NDArray[np.bool_]:
        """Cells belonging to a named region."""
        return self.cell_region_tag == self.region_names.index(name)

    def node_touches(self, cell_mask: NDArray[np.bool_]) -> NDArray[np.bool_]:
        """Nodes that are a corner of at least one selected cell."""
        return _corner_sum(cell_mask.astype(np.float64)) > 0

    def dirichlet_mask(self) -> NDArray[np.bool_]:
        """Nodes held at a fixed potential.

        These are the nodes of gate cells and the bottom plane that
        touches the substrate.
        """
        mask = np.zeros(self.shape, dtype=bool)
        if 'gate' in self.region_names:
            mask |= self.node_touches(self.region_mask('gate'))
        mask[:, 0] = True
        return mask

    def gate_node_mask(self) -> NDArray[np.bool_]:
        """Dirichlet nodes belonging to the gate electrode."""
        mask = self.dirichlet_mask()
        mask[:, 0] = False
        return mask

    def control_volumes(
        self,
        cell_mask: NDArray[np.bool_] | None = None,
    ) -> NDArray[np.float64]:
        """Volume of each node's control volume (nm^3).

        Args:
            cell_mask: Restrict the volume to the parts lying in these
                cells. Defaults to all cells.
        """
        if cell_mask is None:
            weights = np.ones(self.cell_permittivity.shape)
        else:
            weights = cell_mask.astype(np.float64)
        inner, outer = self.ring_areas()
        below, above = _half_widths(self.axial_nodes)
        c = _pad(weights)
        return inner[:, None] * (
            below[None, :] * c[:-1, :-1] + above[None, :] * c[:-1, 1:]
        ) + outer[:, None] * (
            below[None, :] * c[1:, :-1] + above[None, :] * c[1:, 1:]
        )

    def ring_areas(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Annulus areas inside and outside each radial node (nm^2).

        Returns:
            Areas between the previous radial midpoint and each node, and
            between each node and the next radial midpoint.
        """
        r = self.radial_nodes
        mid = 0.5 * (r[:-1] + r[1:])
        inner = np.zeros_like(r)
        outer = np.zeros_like(r)
        inner[1:] = np.pi * (r[1:] ** 2 - mid**2)
        outer[:-1] = np.pi * (mid**2 - r[:-1] ** 2)
        return inner, outer

    def well_midplane(self) -> tuple[int, float]:
        """Axial node below the quantum well mid-plane and its weight.

        A nodal quantity `x` takes the value
        `(1 - w) * x[:, k] + w * x[:, k + 1]` on the mid-plane.

        Returns:
            Tuple of `k` and `w`.

        Raises:
            ValueError: If the mesh was not generated for a device.
        """
        if self.device is None:
            raise ValueError('Mesh was not generated for a device.')
        bottom, top = self.device.layer_bounds(LayerRole.QUANTUM_WELL)
        middle = 0.5 * (bottom + top)
        z = self.axial_nodes
        k = int(np.searchsorted(z, middle, side='right')) - 1
        k = min(max(k, 0), len(z) - 2)
        return k, float((middle - z[k]) / (z[k + 1] - z[k]))

    def node_semiconductor(self) -> NDArray[np.int8]:
        """Region tag of the semiconductor material at each node.

        Nodes on interfaces take the material of the first region in
        `SEMICONDUCTOR_PRIORITY` they touch. Nodes touching no
        semiconductor are `-1`.
        """
        result = np.full(self.shape, -1, dtype=np.int8)
        for name in reversed(SEMICONDUCTOR_PRIORITY):
            if name not in self.region_names:
                continue
            touched = self.node_touches(self.region_mask(name))
            result[touched] = self.region_names.index(name)
        return result

    def identical_to(self, other: Mesh) -> bool:
        """Check that two meshes have bit-identical arrays and tags."""
        return (
            self.region_names == other.region_names
            and np.array_equal(self.radial_nodes, other.radial_nodes)
            and np.array_equal(self.axial_nodes, other.axial_nodes)
            and np.array_equal(
                self.cell_permittivity,
                other.cell_permittivity,
            )
            and np.array_equal(self.cell_region_tag, other.cell_region_tag)
        )


def generate_mesh(
    spec: DeviceSpec,
    refinement: RefinementSpec | None = None,
) -> Mesh:
    """Generate the device mesh.

    Spacing is uniform inside the quantum well and within twice the gate
    radius, refined around the gate footprint plane and graded
    geometrically elsewhere. Node positions depend only on the inputs.

    Args:
        spec: Device description.
        refinement: Resolution controls. Defaults to `RefinementSpec()`.

    Returns:
        The mesh.

    Raises:
        MeshResourceError: If the mesh would have more than
            `refinement.max_nodes` nodes.
    """
    refinement = RefinementSpec() if refinement is None else refinement
    well_bottom, well_top = spec.layer_bounds(LayerRole.QUANTUM_WELL)
    gate_bottom = spec.gate_bottom
    radius = spec.gate_radius

    r_fine_edge = min(2 * radius, spec.mesa_radius)
    radial_zones = [(0.0, r_fine_edge, refinement.gate_spacing)]
    axial_zones = [
        (well_bottom, well_top, refinement.well_spacing),
        (gate_bottom, gate_bottom, refinement.gate_spacing),
    ]

    radial = _segmented_nodes(
        sorted({0.0, radius, r_fine_edge, spec.mesa_radius}),
        radial_zones,
        refinement,
    )
    axial = _segmented_nodes(
        sorted({0.0, well_bottom, well_top, gate_bottom, spec.gate_top}),
        axial_zones,
        refinement,
    )

    count = len(radial) * len(axial)
    if count > refinement.max_nodes:
        raise MeshResourceError(
            f'Mesh would have {len(radial)}x{len(axial)}={count} nodes, '
            f'more than the limit of {refinement.max_nodes}.',
        )

    r_center = 0.5 * (radial[:-1] + radial[1:])
    z_center = 0.5 * (axial[:-1] + axial[1:])
    rc, zc = np.meshgrid(r_center, z_center, indexing='ij')

    tags = np.full(rc.shape, REGION_NAMES.index('vacuum'), dtype=np.int8)
    permittivity = np.ones(rc.shape)
    for role in (
        LayerRole.BUFFER,
        LayerRole.QUANTUM_WELL,
        LayerRole.GATE_DIELECTRIC,
    ):
        bottom, top = spec.layer_bounds(role)
        inside = (zc > bottom) & (zc < top)
        tags[inside] = REGION_NAMES.index(role.value)
        permittivity[inside] = spec.layer(
            role,
        ).material.static_dielectric_constant
    tags[(zc > gate_bottom) & (rc < radius)] = REGION_NAMES.index('gate')

    logger.debug(
        f'Generated {len(radial)}x{len(axial)} node mesh '
        f'(min radial spacing {np.diff(radial).min():.3g} nm, '
        f'min axial spacing {np.diff(axial).min():.3g} nm)',
    )
    return Mesh(
        radial_nodes=radial,
        axial_nodes=axial,
        cell_permittivity=permittivity,
        cell_region_tag=tags,
        device=spec,
    )


def _segmented_nodes(
    breakpoints: list[float],
    zones: list[tuple[float, float, float]],
    refinement: RefinementSpec,
) -> NDArray[np.float64]:
    def spacing(x: NDArray[np.float64]) -> NDArray[np.float64]:
        h = np.full_like(x, refinement.max_spacing)
        for start, stop, size in zones:
            distance = np.maximum(np.maximum(start - x, x - stop), 0.0)
            h = np.minimum(h, size + (refinement.growth_ratio - 1) * distance)
        return h

    pieces = [np.array([breakpoints[0]])]
    for start, stop in zip(breakpoints[:-1], breakpoints[1:]):
        uniform = [
            size for a, b, size in zones if a <= start and stop <= b
        ]
        if len(uniform) > 0:
            cells = max(1, math.ceil((stop - start) / min(uniform) - 1e-9))
            segment = np.linspace(start, stop, cells + 1)
        else:
            segment = _graded_segment(start, stop, spacing)
        pieces.append(segment[1:])
    return np.concatenate(pieces)


def _graded_segment(
    start: float,
    stop: float,
    spacing: Callable[[NDArray[np.float64]], NDArray[np.float64]],
) -> NDArray[np.float64]:
    x = np.linspace(start, stop, _GRADING_SAMPLES)
    density = integrate.cumulative_trapezoid(1.0 / spacing(x), x, initial=0)
    cells = max(1, math.ceil(density[-1] - 1e-9))
    nodes = np.interp(np.linspace(0, density[-1], cells + 1), density, x)
    nodes[0], nodes[-1] = start, stop
    return nodes


def _half_widths(
    nodes: NDArray[np.float64],
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    # Extent of each node's control volume below and above the node.
    half = 0.5 * np.diff(nodes)
    below = np.concatenate(([0.0], half))
    above = np.concatenate((half, [0.0]))
    return below, above


def _pad(cells: NDArray[np.float64]) -> NDArray[np.float64]:
    padded = np.zeros((cells.shape[0] + 2, cells.shape[1] + 2))
    padded[1:-1, 1:-1] = cells
    return padded


def _corner_sum(cells: NDArray[np.float64]) -> NDArray[np.float64]:
    c = _pad(cells)
    return c[:-1, :-1] + c[:-1, 1:] + c[1:, :-1] + c[1:, 1:]


def _frozen(array: NDArray[np.generic]) -> NDArray[np.generic]:
    array = array.copy()
    array.setflags(write=False)
    return array
