from __future__ import annotations

import numpy as np
import pytest

from nanomis.device.mesh import Mesh
from nanomis.electrostatics.exceptions import NotConvergedError
from nanomis.electrostatics.solver import newton_solve
from nanomis.electrostatics.solver import SolverOptions
from nanomis.qdot.profile import ConfinementProfile
from nanomis.qdot.profile import extract_profile


def test_flat_band_profile(coarse_mesh: Mesh) -> None:
    profile = extract_profile(newton_solve(coarse_mesh, 0.0))
    assert np.array_equal(profile.radii, coarse_mesh.radial_nodes)
    assert np.allclose(profile.energies, 750.63, atol=0.01)
    assert profile.gate_bias == 0.0
    assert np.allclose(profile.rise(), 0.0, atol=1e-9)


def test_biased_profile_has_minimum_on_axis(coarse_mesh: Mesh) -> None:
    options = SolverOptions(electrons='none')
    profile = extract_profile(newton_solve(coarse_mesh, 2.5, options=options))
    assert profile.minimum == pytest.approx(profile.energies[0])
    assert profile.energies[-1] > profile.energies[0]


def test_unconverged_field_rejected(coarse_mesh: Mesh) -> None:
    field = newton_solve(
        coarse_mesh,
        2.5,
        options=SolverOptions(max_iterations=1),
    )
    with pytest.raises(NotConvergedError):
        extract_profile(field)


def test_profile_minimum_and_rise() -> None:
    profile = ConfinementProfile(
        radii=np.array([0.0, 1.0, 2.0]),
        energies=np.array([5.0, 4.0, 7.0]),
    )
    assert profile.minimum == 4.0
    assert np.array_equal(profile.rise(), [0.0, -1.0, 2.0])


@pytest.mark.parametrize(
    ('radii', 'energies'),
    (
        ([0.0, 1.0], [1.0]),
        ([0.0, 0.0, 1.0], [1.0, 2.0, 3.0]),
        ([0.0], [1.0]),
        ([0.0, 1.0], [1.0, np.nan]),
    ),
)
def test_profile_validation(radii: list[float], energies: list[float]) -> None:
    with pytest.raises(ValueError):
        ConfinementProfile(radii=np.array(radii), energies=np.array(energies))
