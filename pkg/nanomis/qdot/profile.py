"""Radial confinement potential of the electrostatic dot."""
from __future__ import annotations

import dataclasses

import numpy as np
from numpy.typing import NDArray

from nanomis.electrostatics.exceptions import NotConvergedError
from nanomis.electrostatics.solver import PotentialField


@dataclasses.dataclass(frozen=True, eq=False)
class ConfinementProfile:
    """Conduction band edge along the well mid-plane.

    Attributes:
        radii: Strictly increasing radii starting at the axis (nm).
        energies: Conduction band edge relative to the Fermi level (meV).
        gate_bias: Gate bias of the source field (V).
    """

    radii: NDArray[np.float64]
    energies: NDArray[np.float64]
    gate_bias: float = float('nan')

    def __post_init__(self) -> None:
        radii = np.asarray(self.radii, dtype=np.float64)
        energies = np.asarray(self.energies, dtype=np.float64)
        if radii.ndim != 1 or radii.shape != energies.shape:
            raise ValueError('Radii and energies must be matching 1D arrays.')
        if len(radii) < 2 or np.any(np.diff(radii) <= 0):
            raise ValueError('Radii must be strictly increasing.')
        if not np.all(np.isfinite(energies)):
            raise ValueError('Profile energies must be finite.')
        object.__setattr__(self, 'radii', radii)
        object.__setattr__(self, 'energies', energies)

    @property
    def minimum(self) -> float:
        """Lowest conduction band edge on the profile (meV)."""
        return float(np.min(self.energies))

    def rise(self) -> NDArray[np.float64]:
        """Energy above the value on the axis (meV)."""
        return self.energies - self.energies[0]


def extract_profile(field: PotentialField) -> ConfinementProfile:
    """Sample the conduction band edge on the well mid-plane.

    The two axial node rows around the mid-plane are interpolated
    linearly.

    Raises:
        NotConvergedError: If the field did not converge.
        ValueError: If the field mesh has no device.
    """
    if not field.converged:
        raise NotConvergedError(
            f'Field at V_gate={field.gate_bias} V did not converge.',
        )
    energies = field.well_midplane_conduction_band_edge()
    return ConfinementProfile(
        radii=field.mesh.radial_nodes,
        energies=energies * 1e3,
        gate_bias=field.gate_bias,
    )
