"""Physical constants and unit conversions.

Internally the simulation works in nanometres for lengths, volts for
potentials, electronvolts for band edges and milli-electronvolts for dot
energies. Carrier densities are sheet densities in cm^-2. The conversion
factors below are derived once from the CODATA values shipped with
[`scipy.constants`][scipy.constants].
"""
from __future__ import annotations

import math

import scipy.constants as const

ELECTRON_MASS = const.m_e
"""Free electron rest mass (kg)."""

ELEMENTARY_CHARGE = const.e
"""Elementary charge (C)."""

VACUUM_PERMITTIVITY = const.epsilon_0
"""Vacuum permittivity (F/m)."""

REDUCED_PLANCK = const.hbar
"""Reduced Planck constant (J s)."""

MEV = ELEMENTARY_CHARGE * 1e-3
"""One milli-electronvolt in joules."""

BOHR_MAGNETON_MEV_PER_T = (
    const.physical_constants['Bohr magneton in eV/T'][0] * 1e3
)
"""Bohr magneton (meV/T)."""

HBAR2_OVER_M0 = REDUCED_PLANCK**2 / ELECTRON_MASS / MEV * 1e18
"""hbar^2 / m_0 (meV nm^2)."""

CHARGE_OVER_PERMITTIVITY = ELEMENTARY_CHARGE / VACUUM_PERMITTIVITY * 1e9
"""e / epsilon_0 (V nm). Converts charge in units of e per nm to volts."""

COULOMB_ENERGY = (
    ELEMENTARY_CHARGE**2
    / (4 * math.pi * VACUUM_PERMITTIVITY)
    / MEV
    * 1e9
)
"""e^2 / (4 pi epsilon_0) (meV nm)."""

PLANCK_WAVELENGTH = (
    const.h * const.c / ELEMENTARY_CHARGE * 1e9
)
"""h c (eV nm). Photon wavelength in nm is this divided by energy in eV."""

CM2_TO_NM2 = 1e-14
"""Converts a sheet density in cm^-2 to nm^-2."""
