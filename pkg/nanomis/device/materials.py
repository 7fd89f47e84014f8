"""Material parameters and two-dimensional carrier statistics."""
from __future__ import annotations

import dataclasses
import math
from typing import Any

from nanomis.device.constants import ELECTRON_MASS
from nanomis.device.constants import MEV
from nanomis.device.constants import REDUCED_PLANCK

DEFAULT_CONDUCTION_BAND_OFFSET = 0.50
"""Conduction band offset of the barrier material above the well (eV)."""

DEFAULT_VALENCE_BAND_OFFSET = 0.20
"""Valence band offset of the barrier material below the well (eV)."""


@dataclasses.dataclass(frozen=True)
class MaterialParams:
    """Bulk parameters of a semiconductor layer.

    Attributes:
        name: Human readable material name.
        bandgap: Band gap (eV).
        electron_mass: Conduction band effective mass (units of m_0).
        heavy_hole_mass: Heavy hole effective mass (units of m_0).
        static_dielectric_constant: Relative static permittivity.
        conduction_band_edge_offset: Conduction band edge relative to the
            quantum well material (eV). Zero for the well itself.

    Raises:
        ValueError: If any gap, mass or permittivity is not positive.
    """

    name: str
    bandgap: float
    electron_mass: float
    heavy_hole_mass: float
    static_dielectric_constant: float
    conduction_band_edge_offset: float = 0.0

    def __post_init__(self) -> None:
        for field in (
            'bandgap',
            'electron_mass',
            'heavy_hole_mass',
            'static_dielectric_constant',
        ):
            value = getattr(self, field)
            if not math.isfinite(value) or value <= 0:
                raise ValueError(
                    f'Material {self.name} {field} must be positive. '
                    f'Got {value}.',
                )

    @property
    def electron_density_of_states(self) -> float:
        """Electron sheet density of states (cm^-2 meV^-1)."""
        return density_of_states_2d(self.electron_mass)

    @property
    def hole_density_of_states(self) -> float:
        """Heavy hole sheet density of states (cm^-2 meV^-1)."""
        return density_of_states_2d(self.heavy_hole_mass)

    def to_dict(self) -> dict[str, Any]:
        """Dictionary form used by device configuration files."""
        data = dataclasses.asdict(self)
        data.pop('name')
        return data


def density_of_states_2d(mass: float) -> float:
    """Spin-degenerate two-dimensional density of states.

    Args:
        mass: Effective mass in units of the free electron mass.

    Returns:
        m / (pi hbar^2) in cm^-2 meV^-1.

    Raises:
        ValueError: If `mass` is not positive.
    """
    if mass <= 0:
        raise ValueError(f'Effective mass must be positive. Got {mass}.')
    per_joule_per_m2 = mass * ELECTRON_MASS / (math.pi * REDUCED_PLANCK**2)
    return per_joule_per_m2 * MEV * 1e-4


def hole_fermi_energy(sheet_density: float, hole_mass: float) -> float:
    """Zero-temperature hole Fermi energy of a two-dimensional hole gas.

    All holes occupy the single heavy hole subband so the Fermi energy,
    measured from the valence band edge, is the sheet density divided by
    the density of states.

    Args:
        sheet_density: Hole sheet density (cm^-2).
        hole_mass: Heavy hole mass (units of m_0).

    Returns:
        Fermi energy in meV.

    Raises:
        ValueError: If `sheet_density` is negative or `hole_mass` is not
            positive.
    """
    if sheet_density < 0:
        raise ValueError(
            f'Sheet density must be non-negative. Got {sheet_density}.',
        )
    return sheet_density / density_of_states_2d(hole_mass)


IN_GA_AS = MaterialParams(
    name='In0.53Ga0.47As',
    bandgap=0.75,
    electron_mass=0.045,
    heavy_hole_mass=0.38,
    static_dielectric_constant=14.0,
)
"""Lattice-matched InGaAs quantum well material."""


def in_al_as(
    conduction_band_offset: float = DEFAULT_CONDUCTION_BAND_OFFSET,
    valence_band_offset: float = DEFAULT_VALENCE_BAND_OFFSET,
) -> MaterialParams:
    """Lattice-matched InAlAs barrier material.

    The barrier gap is the well gap widened by both band offsets.

    Args:
        conduction_band_offset: Conduction band step above the well (eV).
        valence_band_offset: Valence band step below the well (eV).
    """
    return MaterialParams(
        name='In0.52Al0.48As',
        bandgap=round(
            IN_GA_AS.bandgap + conduction_band_offset + valence_band_offset,
            12,
        ),
        electron_mass=0.075,
        heavy_hole_mass=0.41,
        static_dielectric_constant=14.0,
        conduction_band_edge_offset=conduction_band_offset,
    )


IN_P = MaterialParams(
    name='InP',
    bandgap=1.344,
    electron_mass=0.08,
    heavy_hole_mass=0.6,
    static_dielectric_constant=14.0,
    conduction_band_edge_offset=0.25,
)
"""InP substrate. Held at the reference potential so only documented."""
