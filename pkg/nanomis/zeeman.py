"""Zeeman splitting and optical selection rules of the dot.

The dot electron has spin projection `+1/2` or `-1/2` and the heavy hole
`+3/2` or `-3/2` along the growth axis. A photon is emitted only when the
total angular momentum changes by one unit: `(+1/2, +3/2)` emits
`sigma-` light and `(-1/2, -3/2)` emits `sigma+` light. The other two
pairings are dark.

The photon energy shift of a transition is
`mu_B * B * (g_electron * s_electron + g_hole * s_hole)`, so reversing
both spins reverses the shift.
"""
from __future__ import annotations

import dataclasses
import enum
import math
import warnings
from typing import Any

from nanomis.device.constants import BOHR_MAGNETON_MEV_PER_T
from nanomis.device.constants import PLANCK_WAVELENGTH
from nanomis.warnings import UnsourcedParameterWarning

ELECTRON_SPINS = (0.5, -0.5)
HOLE_SPINS = (1.5, -1.5)

DEFAULT_G_ELECTRON = -3.0
"""Electron g-factor of the InGaAs dot."""

DEFAULT_G_HOLE = 0.6
"""Heavy hole g-factor. A placeholder without a device measurement."""

SIGN_CONVENTION = (
    'shift_meV = mu_B * B * (g_electron * electron_sz + g_hole * hole_sz)'
)

G_HOLE_WARNING = (
    'g_hole is a placeholder value without a device measurement; hole '
    'splittings and transition shifts depend on it.'
)


class Polarization(str, enum.Enum):
    """Circular polarization of an emitted photon."""

    SIGMA_MINUS = 'sigma_minus'
    """Emitted by the `(+1/2, +3/2)` pair."""
    SIGMA_PLUS = 'sigma_plus'
    """Emitted by the `(-1/2, -3/2)` pair."""
    FORBIDDEN = 'forbidden'
    """The pair cannot recombine radiatively."""


@dataclasses.dataclass(frozen=True)
class ZeemanConfig:
    """Magnetic field and spin state of the dot.

    Attributes:
        b_field_z: Field along the growth axis (T).
        g_electron: Electron g-factor.
        g_hole: Heavy hole g-factor.
        electron_sz: Electron spin projection.
        hole_sz: Heavy hole spin projection.

    Raises:
        ValueError: If the field is negative, `g_hole` is not positive or
            a spin projection is not allowed.
    """

    b_field_z: float = 0.0
    g_electron: float = DEFAULT_G_ELECTRON
    g_hole: float = DEFAULT_G_HOLE
    electron_sz: float = 0.5
    hole_sz: float = 1.5

    def __post_init__(self) -> None:
        if math.isnan(self.b_field_z) or self.b_field_z < 0:
            raise ValueError(
                f'Magnetic field must be non-negative. Got {self.b_field_z}.',
            )
        if not self.g_hole > 0:
            raise ValueError(f'g_hole must be positive. Got {self.g_hole}.')
        _check_electron(self.electron_sz)
        _check_hole(self.hole_sz)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ZeemanConfig:
        """Build from a configuration section.

        Raises:
            ValueError: If keys are unknown or values invalid.
        """
        try:
            return cls(**{key: float(value) for key, value in data.items()})
        except TypeError as e:
            raise ValueError(
                f'Keys in zeeman config do not match expected: {e!s}.',
            ) from None


@dataclasses.dataclass(frozen=True)
class EmissionEvent:
    """Optical transition of a spin pair.

    Attributes:
        polarization: Photon polarization.
        photon_energy_shift: Zeeman shift of the photon energy (meV).
            `None` for dark pairs.
        electron_state: Electron spin projection.
        hole_state: Hole spin projection.
        photon_energy: Photon energy including the shift (eV), if a
            transition energy was given.
        wavelength: Photon wavelength (nm), if a transition energy was
            given.
    """

    polarization: Polarization
    photon_energy_shift: float | None
    electron_state: float
    hole_state: float
    photon_energy: float | None = None
    wavelength: float | None = None

    def to_dict(self) -> dict[str, Any]:
        """Report form of the transition."""
        return {
            'e_sz': self.electron_state,
            'h_sz': self.hole_state,
            'polarization': self.polarization.value,
            'shift_meV': self.photon_energy_shift,
            'photon_energy_eV': self.photon_energy,
            'wavelength_nm': self.wavelength,
        }


def _check_electron(sz: float) -> None:
    if sz not in ELECTRON_SPINS:
        raise ValueError(f'Electron spin must be +-1/2. Got {sz}.')


def _check_hole(sz: float) -> None:
    if sz not in HOLE_SPINS:
        raise ValueError(f'Heavy hole spin must be +-3/2. Got {sz}.')


def electron_splitting(config: ZeemanConfig) -> float:
    """Energy between the electron spin states (meV)."""
    return abs(config.g_electron) * BOHR_MAGNETON_MEV_PER_T * config.b_field_z


def hole_splitting(config: ZeemanConfig) -> float:
    """Energy between the heavy hole spin states (meV)."""
    return 3 * config.g_hole * BOHR_MAGNETON_MEV_PER_T * config.b_field_z


def transition_polarization(
    electron_sz: float,
    hole_sz: float,
) -> Polarization:
    """Polarization of the photon a spin pair emits.

    Raises:
        ValueError: If a spin projection is not allowed.
    """
    _check_electron(electron_sz)
    _check_hole(hole_sz)
    if electron_sz == 0.5 and hole_sz == 1.5:
        return Polarization.SIGMA_MINUS
    if electron_sz == -0.5 and hole_sz == -1.5:
        return Polarization.SIGMA_PLUS
    return Polarization.FORBIDDEN


def recombination_partner(electron_sz: float) -> float:
    """Hole spin that recombines radiatively with an electron spin."""
    _check_electron(electron_sz)
    return 3 * electron_sz


def apply_pi_pulse(electron_sz: float) -> float:
    """Flip the electron spin with a resonant pi pulse."""
    _check_electron(electron_sz)
    return -electron_sz


def transition_shift(
    config: ZeemanConfig,
    electron_sz: float,
    hole_sz: float,
) -> float:
    """Zeeman shift of the photon energy of a spin pair (meV)."""
    _check_electron(electron_sz)
    _check_hole(hole_sz)
    return (
        BOHR_MAGNETON_MEV_PER_T
        * config.b_field_z
        * (config.g_electron * electron_sz + config.g_hole * hole_sz)
    )


def emission_event(
    config: ZeemanConfig,
    *,
    transition_energy: float | None = None,
) -> EmissionEvent:
    """Optical transition of the configured spin pair.

    Args:
        config: Field and spin state.
        transition_energy: Zero-field photon energy (eV).

    Returns:
        The event. Dark pairs carry no energy shift.
    """
    polarization = transition_polarization(config.electron_sz, config.hole_sz)
    if polarization is Polarization.FORBIDDEN:
        return EmissionEvent(
            polarization=polarization,
            photon_energy_shift=None,
            electron_state=config.electron_sz,
            hole_state=config.hole_sz,
        )
    shift = transition_shift(config, config.electron_sz, config.hole_sz)
    energy = None
    wavelength = None
    if transition_energy is not None:
        energy = transition_energy + shift * 1e-3
        wavelength = PLANCK_WAVELENGTH / energy
    return EmissionEvent(
        polarization=polarization,
        photon_energy_shift=shift,
        electron_state=config.electron_sz,
        hole_state=config.hole_sz,
        photon_energy=energy,
        wavelength=wavelength,
    )


def zeeman_report(
    config: ZeemanConfig,
    *,
    transition_energy: float | None = None,
) -> dict[str, Any]:
    """Splittings and all four spin pairings at the configured field.

    Warns:
        UnsourcedParameterWarning: Always, since the hole g-factor is a
            placeholder.
    """
    warnings.warn(G_HOLE_WARNING, UnsourcedParameterWarning, stacklevel=2)
    transitions = []
    for electron_sz in ELECTRON_SPINS:
        for hole_sz in HOLE_SPINS:
            pair = dataclasses.replace(
                config,
                electron_sz=electron_sz,
                hole_sz=hole_sz,
            )
            event = emission_event(pair, transition_energy=transition_energy)
            transitions.append(event.to_dict())
    return {
        'b_tesla': config.b_field_z,
        'g_electron': config.g_electron,
        'g_hole': config.g_hole,
        'electron_splitting_meV': electron_splitting(config),
        'hole_splitting_meV': hole_splitting(config),
        'configured': emission_event(
            config,
            transition_energy=transition_energy,
        ).to_dict(),
        'transitions': transitions,
        'sign_convention': SIGN_CONVENTION,
        'warnings': [G_HOLE_WARNING],
    }
