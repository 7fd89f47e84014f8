"""Finite-volume discretization of the axisymmetric Poisson equation.

The operator `-div(eps grad V)` is assembled on the node-centred control
volumes of a [`Mesh`][nanomis.device.mesh.Mesh]. Fluxes between
neighbouring nodes use the permittivity of the cells the shared face
crosses, so the flux is continuous across material interfaces. The
symmetry axis, the mesa wall and the top of the domain are natural
(zero normal field) boundaries.
"""
from __future__ import annotations

import dataclasses
import logging

import numpy as np
from numpy.typing import NDArray
from scipy import sparse
from scipy.sparse import csgraph
from scipy.sparse import linalg

from nanomis.device.constants import CHARGE_OVER_PERMITTIVITY
from nanomis.device.constants import ELEMENTARY_CHARGE
from nanomis.device.mesh import Mesh
from nanomis.electrostatics.charge import ChargeState
from nanomis.electrostatics.exceptions import AssemblyError

logger = logging.getLogger(__name__)


def stiffness_matrix(mesh: Mesh) -> sparse.csr_matrix:
    """Assemble the discrete operator over every node.

    Rows have zero sum and the matrix is symmetric. Entries are in nm so
    that `K @ V` equals the enclosed charge in units of e times
    `e / epsilon_0` (V nm).
    """
    nr, nz = mesh.shape
    r = mesh.radial_nodes
    z = mesh.axial_nodes
    inner, outer = mesh.ring_areas()
    half = 0.5 * np.diff(z)
    below = np.concatenate(([0.0], half))
    above = np.concatenate((half, [0.0]))

    eps = np.zeros((nr + 1, nz + 1))
    eps[1:-1, 1:-1] = mesh.cell_permittivity

    mid = 0.5 * (r[:-1] + r[1:])
    dr = np.diff(r)
    radial = (
        2
        * np.pi
        * (mid / dr)[:, None]
        * (eps[1:-1, :-1] * below[None, :] + eps[1:-1, 1:] * above[None, :])
    )
    axial = (
        eps[:-1, 1:-1] * inner[:, None] + eps[1:, 1:-1] * outer[:, None]
    ) / np.diff(z)[None, :]

    index = np.arange(nr * nz).reshape(nr, nz)
    rows = np.concatenate(
        (index[:-1, :].ravel(), index[:, :-1].ravel()),
    )
    cols = np.concatenate((index[1:, :].ravel(), index[:, 1:].ravel()))
    weights = np.concatenate((radial.ravel(), axial.ravel()))
    keep = weights > 0
    rows, cols, weights = rows[keep], cols[keep], weights[keep]

    off = sparse.coo_matrix(
        (
            np.concatenate((-weights, -weights)),
            (np.concatenate((rows, cols)), np.concatenate((cols, rows))),
        ),
        shape=(nr * nz, nr * nz),
    ).tocsr()
    diagonal = -np.asarray(off.sum(axis=1)).ravel()
    return (off + sparse.diags(diagonal)).tocsr()


@dataclasses.dataclass(frozen=True, eq=False)
class LinearProblem:
    """Poisson system restricted to the free nodes.

    Attributes:
        mesh: Mesh the system is assembled on.
        stiffness: Operator over all nodes.
        matrix: Operator restricted to the free nodes.
        rhs: Right hand side with the Dirichlet values eliminated.
        free: Flat indices of the free nodes.
        fixed: Flat indices of the Dirichlet nodes.
        fixed_values: Potential of the Dirichlet nodes (V).
    """

    mesh: Mesh
    stiffness: sparse.csr_matrix
    matrix: sparse.csr_matrix
    rhs: NDArray[np.float64]
    free: NDArray[np.int64]
    fixed: NDArray[np.int64]
    fixed_values: NDArray[np.float64]

    def solve(self) -> NDArray[np.float64]:
        """Solve the linear system.

        Returns:
            Potential on every node with shape `mesh.shape` (V).
        """
        potential = np.empty(self.mesh.node_count)
        potential[self.fixed] = self.fixed_values
        potential[self.free] = linalg.spsolve(self.matrix.tocsc(), self.rhs)
        return potential.reshape(self.mesh.shape)


def dirichlet_values(
    mesh: Mesh,
    gate_bias: float,
) -> tuple[NDArray[np.bool_], NDArray[np.float64]]:
    """Fixed-potential nodes and their potential.

    The gate sits at the bias less the device gate offset and the
    substrate plane at zero.

    Returns:
        Mask of Dirichlet nodes and the potential of every node, zero
        where the node is free.
    """
    offset = 0.0 if mesh.device is None else mesh.device.gate_offset
    mask = mesh.dirichlet_mask()
    values = np.zeros(mesh.shape)
    values[mesh.gate_node_mask()] = gate_bias - offset
    return mask, values


def node_charge(mesh: Mesh, charge: ChargeState) -> NDArray[np.float64]:
    """Charge of each node's control volume in units of e."""
    volumes = mesh.control_volumes(mesh.region_mask('quantum_well'))
    # C/m^3 times nm^3 in units of e.
    return charge.net_volume_charge * volumes * 1e-27 / ELEMENTARY_CHARGE


def assemble_system(
    mesh: Mesh,
    gate_bias: float,
    charge: ChargeState | None = None,
) -> LinearProblem:
    """Assemble the linear system for a fixed charge distribution.

    Args:
        mesh: Device mesh.
        gate_bias: Gate bias (V).
        charge: Space charge. Only its part in the quantum well region
            enters. Defaults to no charge.

    Returns:
        The system restricted to the free nodes.

    Raises:
        AssemblyError: If some free node is not connected to a Dirichlet
            node so the system is singular.
    """
    stiffness = stiffness_matrix(mesh)
    mask, values = dirichlet_values(mesh, gate_bias)
    fixed = np.flatnonzero(mask.ravel())
    free = np.flatnonzero(~mask.ravel())
    check_connectivity(stiffness, fixed)

    k_ff = stiffness[free][:, free]
    k_fd = stiffness[free][:, fixed]
    fixed_values = values.ravel()[fixed]
    rhs = -(k_fd @ fixed_values)
    if charge is not None:
        q = node_charge(mesh, charge).ravel()
        rhs = rhs + CHARGE_OVER_PERMITTIVITY * q[free]
    return LinearProblem(
        mesh=mesh,
        stiffness=stiffness,
        matrix=k_ff.tocsr(),
        rhs=rhs,
        free=free,
        fixed=fixed,
        fixed_values=fixed_values,
    )


def check_connectivity(
    stiffness: sparse.csr_matrix,
    fixed: NDArray[np.int64],
) -> None:
    """Check every connected component holds a Dirichlet node.

    Raises:
        AssemblyError: If a component floats.
    """
    graph = stiffness.copy()
    graph.setdiag(0)
    graph.eliminate_zeros()
    count, labels = csgraph.connected_components(graph, directed=False)
    anchored = np.zeros(count, dtype=bool)
    anchored[labels[fixed]] = True
    if not np.all(anchored):
        floating = int(np.sum(~anchored[labels]))
        raise AssemblyError(
            f'{floating} node(s) are not connected to a fixed-potential '
            'boundary.',
        )
    logger.debug(f'Poisson graph has {count} anchored component(s)')
