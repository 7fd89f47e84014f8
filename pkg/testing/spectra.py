"""Synthetic dot spectra and profiles."""
from __future__ import annotations

import numpy as np

from nanomis.qdot.fit import ParabolaFit
from nanomis.qdot.profile import ConfinementProfile
from nanomis.qdot.spectrum import confinement_length
from nanomis.qdot.spectrum import DotSpectrum
from nanomis.qdot.spectrum import fock_darwin_levels


def parabolic_profile(
    curvature: float,
    offset: float = 0.0,
    *,
    radius: float = 150.0,
    spacing: float = 1.0,
    saturation: float | None = None,
) -> ConfinementProfile:
    """Profile `offset + curvature * r^2`, optionally capped at a value."""
    radii = np.arange(0, radius + spacing / 2, spacing)
    energies = offset + curvature * radii**2
    if saturation is not None:
        energies = np.minimum(energies, saturation)
    return ConfinementProfile(radii=radii, energies=energies)


def synthetic_spectrum(
    gate_bias: float,
    ground_state: float,
    hbar_omega0: float = 12.5,
) -> DotSpectrum:
    """Dot spectrum with a given ground state energy (meV)."""
    return DotSpectrum(
        gate_bias=gate_bias,
        curvature=0.046,
        hbar_omega0=hbar_omega0,
        confinement_length=confinement_length(hbar_omega0, 0.045),
        levels=tuple(fock_darwin_levels(hbar_omega0)),
        ground_state_energy_absolute=ground_state,
        charging_energy=11.0,
        disk_charging_energy=4.6,
        fit=ParabolaFit(0.046, ground_state - hbar_omega0, 0.0, 20.0, 21),
    )
