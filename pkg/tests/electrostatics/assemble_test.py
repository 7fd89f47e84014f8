from __future__ import annotations

import dataclasses

import numpy as np
import pytest
from scipy import sparse

from nanomis.device.constants import VACUUM_PERMITTIVITY
from nanomis.device.mesh import generate_mesh
from nanomis.device.mesh import Mesh
from nanomis.device.structure import DeviceSpec
from nanomis.electrostatics.assemble import assemble_system
from nanomis.electrostatics.assemble import check_connectivity
from nanomis.electrostatics.assemble import dirichlet_values
from nanomis.electrostatics.assemble import stiffness_matrix
from nanomis.electrostatics.charge import ChargeState
from nanomis.electrostatics.exceptions import AssemblyError
from testing.devices import slab_mesh
from testing.devices import TINY_REFINEMENT


def _volume_charge(mesh: Mesh, rho: np.ndarray) -> ChargeState:
    zeros = np.zeros(mesh.shape)
    return ChargeState(
        electron_sheet_density=zeros,
        hole_sheet_density=zeros,
        ionized_acceptor_density=0.0,
        net_volume_charge=rho,
        well_mask=np.ones(mesh.shape, dtype=bool),
    )


def test_stiffness_symmetric_zero_row_sums(coarse_mesh: Mesh) -> None:
    k = stiffness_matrix(coarse_mesh)
    assert k.shape == (coarse_mesh.node_count, coarse_mesh.node_count)
    assert abs(k - k.T).max() < 1e-9 * abs(k).max()
    row_sums = np.asarray(k.sum(axis=1)).ravel()
    assert np.allclose(row_sums, 0.0, atol=1e-9 * abs(k).max())
    assert np.all(k.diagonal() > 0)


def test_plate_capacitor_linear() -> None:
    z = np.linspace(0, 11, 12)
    mesh = slab_mesh(z, 3.0)
    potential = assemble_system(mesh, 1.0).solve()
    expected = np.minimum(z / 10.0, 1.0)
    assert np.allclose(potential, expected[None, :], atol=1e-12)


def test_dielectric_step() -> None:
    z = np.linspace(0, 11, 12)
    eps = np.where(np.arange(11) < 5, 1.0, 4.0)
    mesh = slab_mesh(z, eps)
    potential = assemble_system(mesh, 1.0).solve()
    # Series capacitor: the low permittivity half takes 4/5 of the bias.
    assert np.allclose(potential[:, 5], 0.8, atol=1e-12)
    assert np.allclose(potential[:, 2], 0.8 * 2 / 5, atol=1e-12)


def test_uniform_permittivity_scaling_without_charge(
    coarse_mesh: Mesh,
) -> None:
    doubled = Mesh(
        radial_nodes=coarse_mesh.radial_nodes,
        axial_nodes=coarse_mesh.axial_nodes,
        cell_permittivity=2 * coarse_mesh.cell_permittivity,
        cell_region_tag=coarse_mesh.cell_region_tag,
        device=coarse_mesh.device,
    )
    first = assemble_system(coarse_mesh, 2.5).solve()
    second = assemble_system(doubled, 2.5).solve()
    assert np.allclose(first, second, atol=1e-10)


def test_uniform_volume_charge_parabola() -> None:
    length, eps = 10.0, 14.0
    z = np.linspace(0, length + 1, 12)
    mesh = slab_mesh(z, eps, charged=True)
    rho = -16021.766
    charge = _volume_charge(mesh, np.full(mesh.shape, rho))
    potential = assemble_system(mesh, 0.0, charge).solve()

    zm = z[:-1] * 1e-9
    expected = rho * zm * (length * 1e-9 - zm) / (
        2 * VACUUM_PERMITTIVITY * eps
    )
    assert np.allclose(potential[:, :-1], expected[None, :], rtol=1e-6)
    assert potential[0, 5] == pytest.approx(-1.6157e-3, rel=1e-3)


def test_second_order_convergence() -> None:
    length, rho0 = 10.0, 1e4
    peak = rho0 * (length * 1e-9) ** 2 / (np.pi**2 * VACUUM_PERMITTIVITY)
    errors = []
    for cells in (8, 16, 32):
        h = length / cells
        z = np.concatenate((np.linspace(0, length, cells + 1), [length + h]))
        mesh = slab_mesh(z, charged=True)
        rho = rho0 * np.sin(np.pi * np.minimum(z, length) / length)
        charge = _volume_charge(mesh, np.tile(rho, (mesh.shape[0], 1)))
        potential = assemble_system(mesh, 0.0, charge).solve()
        errors.append(abs(potential[0, cells // 2] - peak))
    orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    assert np.all(orders >= 1.8)


def test_gate_offset_applied(default_device: DeviceSpec) -> None:
    device = dataclasses.replace(default_device, gate_offset=0.2)
    mesh = generate_mesh(device, TINY_REFINEMENT)
    mask, values = dirichlet_values(mesh, 2.5)
    gate = mesh.gate_node_mask()
    assert np.allclose(values[gate], 2.3)
    assert np.all(values[:, 0] == 0.0)
    assert np.all(mask[gate])


def test_potential_bounded_by_electrodes(coarse_mesh: Mesh) -> None:
    potential = assemble_system(coarse_mesh, 2.0).solve()
    assert potential.min() >= -1e-12
    assert potential.max() <= 2.0 + 1e-12


def test_floating_component() -> None:
    laplacian = sparse.csr_matrix(
        np.array(
            [
                [1.0, -1.0, 0.0, 0.0],
                [-1.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, -1.0],
                [0.0, 0.0, -1.0, 1.0],
            ],
        ),
    )
    check_connectivity(laplacian, np.array([0, 2]))
    with pytest.raises(AssemblyError, match='2 node'):
        check_connectivity(laplacian, np.array([0]))
