from __future__ import annotations

import dataclasses
import logging

import numpy as np
import pytest

from nanomis.device.mesh import generate_mesh
from nanomis.device.mesh import Mesh
from nanomis.device.structure import DeviceSpec
from nanomis.electrostatics.assemble import assemble_system
from nanomis.electrostatics.solver import newton_solve
from nanomis.electrostatics.solver import PotentialField
from nanomis.electrostatics.solver import SolverOptions
from testing.devices import slab_mesh
from testing.devices import TINY_REFINEMENT


@pytest.fixture(scope='module')
def solved(coarse_mesh: Mesh) -> PotentialField:
    return newton_solve(coarse_mesh, 2.5)


@pytest.fixture(scope='module')
def tiny_mesh(default_device: DeviceSpec) -> Mesh:
    return generate_mesh(default_device, TINY_REFINEMENT)


def test_flat_band_at_zero_bias(
    coarse_mesh: Mesh,
    default_device: DeviceSpec,
) -> None:
    field = newton_solve(coarse_mesh, 0.0)
    assert field.converged
    assert field.newton_iterations == 0
    assert np.allclose(field.potential, 0.0)
    well = field.charge.well_mask
    fermi = default_device.hole_fermi_energy * 1e-3
    assert np.allclose(field.valence_band_edge[well], fermi)
    assert np.allclose(field.charge.net_sheet_density(), 0.0, atol=1.0)
    assert field.min_conduction_band_edge() == pytest.approx(0.75063, 1e-5)


def test_zero_doping_matches_laplace(default_device: DeviceSpec) -> None:
    device = dataclasses.replace(default_device, acceptor_sheet_density=0.0)
    mesh = generate_mesh(device, TINY_REFINEMENT)
    options = SolverOptions(smoothing=0.0, electrons='none')
    field = newton_solve(mesh, 1.0, options=options)
    laplace = assemble_system(mesh, 1.0).solve()

    assert field.converged
    assert np.allclose(field.potential, laplace, atol=1e-9)
    assert np.all(field.charge.hole_sheet_density == 0.0)


def test_solution_converged(solved: PotentialField) -> None:
    assert solved.converged
    assert solved.residual_norm <= solved.options.tolerance
    assert solved.potential.shape == solved.mesh.shape
    assert len(solved.residual_history) == solved.newton_iterations + 1


def test_residual_history_decreases(solved: PotentialField) -> None:
    history = np.array(solved.residual_history)
    assert np.all(np.diff(history) < 0)


def test_gauss_balance(solved: PotentialField) -> None:
    charges = solved.electrode_charges()
    assert charges.gate > 0
    assert charges.semiconductor < 0
    assert charges.imbalance < 1e-6


def test_band_edges_consistent(solved: PotentialField) -> None:
    well = solved.charge.well_mask
    gap = solved.conduction_band_edge - solved.valence_band_edge
    assert np.allclose(gap[well], 0.75)
    top = solved.mesh.axial_nodes[-1]
    outside = solved.mesh.axial_nodes == top
    assert np.all(np.isnan(solved.conduction_band_edge[:, outside]))


def test_gate_bias_lowers_conduction_band(
    coarse_mesh: Mesh,
    solved: PotentialField,
) -> None:
    flat = newton_solve(coarse_mesh, 0.0)
    assert solved.min_conduction_band_edge() < (
        flat.min_conduction_band_edge() - 0.1
    )


def test_smoothing_insensitive(
    coarse_mesh: Mesh,
    solved: PotentialField,
) -> None:
    sharper = newton_solve(
        coarse_mesh,
        2.5,
        solved,
        SolverOptions(smoothing=0.05),
    )
    assert sharper.converged
    difference = abs(
        sharper.min_conduction_band_edge()
        - solved.min_conduction_band_edge(),
    )
    assert difference < 5e-4


def test_warm_start_same_solution(
    coarse_mesh: Mesh,
    solved: PotentialField,
) -> None:
    warm = newton_solve(coarse_mesh, 2.5, solved.potential)
    assert warm.converged
    assert warm.newton_iterations <= solved.newton_iterations
    assert np.allclose(warm.potential, solved.potential, atol=1e-8)


def test_electron_count_non_negative(solved: PotentialField) -> None:
    assert solved.electron_count() >= 0.0


def test_no_electron_model_keeps_dot_empty(coarse_mesh: Mesh) -> None:
    options = SolverOptions(electrons='none')
    field = newton_solve(coarse_mesh, 3.5, options=options)
    assert field.converged
    assert field.electron_count() == 0.0


def test_min_conduction_band_monotonic_in_bias(tiny_mesh: Mesh) -> None:
    rng = np.random.default_rng(7)
    biases = np.sort(rng.uniform(0.0, 3.5, size=50))
    edges = []
    guess = None
    for bias in biases:
        field = newton_solve(tiny_mesh, float(bias), guess)
        assert field.converged
        edges.append(field.min_conduction_band_edge())
        guess = field
    assert np.all(np.diff(edges) <= 1e-9)


def test_iteration_limit_reported(
    coarse_mesh: Mesh,
    caplog: pytest.LogCaptureFixture,
) -> None:
    caplog.set_level(logging.WARNING)
    field = newton_solve(
        coarse_mesh,
        2.5,
        options=SolverOptions(max_iterations=1),
    )
    assert not field.converged
    assert field.newton_iterations == 1
    messages = [record.message for record in caplog.records]
    assert any('did not converge' in m or 'stalled' in m for m in messages)


def test_initial_guess_shape(coarse_mesh: Mesh) -> None:
    with pytest.raises(ValueError, match='shape'):
        newton_solve(coarse_mesh, 1.0, np.zeros((2, 2)))


def test_mesh_requires_device() -> None:
    with pytest.raises(ValueError, match='device'):
        newton_solve(slab_mesh(np.linspace(0, 5, 6)), 1.0)


@pytest.mark.parametrize(
    'kwargs',
    (
        {'tolerance': 0.0},
        {'max_iterations': 0},
        {'smoothing': -1.0},
        {'electrons': 'boltzmann'},
        {'max_update': 0.0},
        {'min_damping': 2.0},
    ),
)
def test_options_validation(kwargs: dict[str, object]) -> None:
    with pytest.raises(ValueError):
        SolverOptions(**kwargs)  # type: ignore[arg-type]


def test_options_replace() -> None:
    options = SolverOptions().replace(electrons='none')
    assert options.electrons == 'none'
    assert options.tolerance == SolverOptions().tolerance


def test_min_conduction_band_on_midplane(solved: PotentialField) -> None:
    midplane = solved.well_midplane_conduction_band_edge()
    assert midplane.shape == (solved.mesh.shape[0],)
    assert solved.min_conduction_band_edge() == np.min(midplane)
    well = solved.charge.well_mask
    assert solved.min_conduction_band_edge() >= np.min(
        solved.conduction_band_edge[well],
    )


def test_carriers_uniform_across_well(solved: PotentialField) -> None:
    well = solved.charge.well_mask
    electrons, holes = solved.well_sheet_densities()
    for column in range(solved.mesh.shape[0]):
        inside = well[column]
        assert np.all(
            solved.charge.hole_sheet_density[column, inside] == holes[column],
        )
        assert np.all(
            solved.charge.electron_sheet_density[column, inside]
            == electrons[column],
        )


def test_well_sheet_densities_at_flat_band(coarse_mesh: Mesh) -> None:
    field = newton_solve(coarse_mesh, 0.0)
    electrons, holes = field.well_sheet_densities()
    assert np.allclose(holes, 1e11, rtol=1e-6)
    assert np.all(electrons == 0.0)


def test_gate_depletes_holes_under_gate(solved: PotentialField) -> None:
    _, holes = solved.well_sheet_densities()
    assert holes[0] < 0.01 * holes[-1]
    assert holes[-1] == pytest.approx(1e11, rel=1e-3)
