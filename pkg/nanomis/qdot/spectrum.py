"""Fock-Darwin single-particle spectrum and charging energy of the dot."""
from __future__ import annotations

import dataclasses
import enum
import math

from nanomis.device.constants import COULOMB_ENERGY
from nanomis.device.constants import HBAR2_OVER_M0
from nanomis.electrostatics.solver import PotentialField
from nanomis.qdot.exceptions import FitError
from nanomis.qdot.fit import fit_parabola
from nanomis.qdot.fit import ParabolaFit
from nanomis.qdot.profile import extract_profile

SPIN_DEGENERACY = 2


class ChargingEstimator(str, enum.Enum):
    """Estimate of the energy to add a second electron to the dot."""

    INTERACTION_INTEGRAL = 'interaction_integral'
    """Coulomb interaction of two electrons in the oscillator ground state."""
    DISK_SELF_CAPACITANCE = 'disk_self_capacitance'
    """Self-capacitance of a conducting disk with the gate radius."""


@dataclasses.dataclass(frozen=True)
class Shell:
    """Degenerate shell of the two-dimensional harmonic oscillator.

    Attributes:
        index: Shell index `k = 2n + |l| + 1`, also its orbital count.
        energy: Level energy above the band minimum (meV).
        orbital_degeneracy: Number of orbitals `(n, l)` in the shell.
        quantum_numbers: Radial and angular quantum numbers `(n, l)`.
        spin_degeneracy: Spin states per orbital.
    """

    index: int
    energy: float
    orbital_degeneracy: int
    quantum_numbers: tuple[tuple[int, int], ...]
    spin_degeneracy: int = SPIN_DEGENERACY


@dataclasses.dataclass(frozen=True)
class DotSpectrum:
    """Single-particle levels and charging energy at one gate bias.

    Attributes:
        gate_bias: Gate bias (V).
        curvature: Fitted confinement curvature (meV/nm^2).
        hbar_omega0: Level spacing (meV).
        confinement_length: Oscillator length (nm).
        levels: Shells starting with the ground shell.
        ground_state_energy_absolute: Lowest level relative to the Fermi
            level (meV).
        charging_energy: Interaction integral estimate (meV).
        disk_charging_energy: Disk self-capacitance estimate (meV).
        fit: Underlying parabola fit.
    """

    gate_bias: float
    curvature: float
    hbar_omega0: float
    confinement_length: float
    levels: tuple[Shell, ...]
    ground_state_energy_absolute: float
    charging_energy: float
    disk_charging_energy: float
    fit: ParabolaFit


def hbar_omega0(curvature: float, electron_mass: float) -> float:
    """Level spacing of a parabolic dot (meV).

    Args:
        curvature: Confinement curvature (meV/nm^2).
        electron_mass: Effective mass (m_0).

    Raises:
        ValueError: If the curvature is negative or the mass is not
            positive.
    """
    if curvature < 0:
        raise ValueError(f'Curvature must be non-negative. Got {curvature}.')
    if electron_mass <= 0:
        raise ValueError(f'Mass must be positive. Got {electron_mass}.')
    return math.sqrt(2 * curvature * HBAR2_OVER_M0 / electron_mass)


def curvature_for_spacing(hbar_omega0: float, electron_mass: float) -> float:
    """Curvature giving a level spacing (meV/nm^2)."""
    return hbar_omega0**2 * electron_mass / (2 * HBAR2_OVER_M0)


def confinement_length(hbar_omega0: float, electron_mass: float) -> float:
    """Oscillator length `sqrt(hbar / (m omega0))` (nm)."""
    if hbar_omega0 <= 0:
        raise ValueError(f'Level spacing must be positive. Got {hbar_omega0}.')
    return math.sqrt(HBAR2_OVER_M0 / (electron_mass * hbar_omega0))


def fock_darwin_levels(hbar_omega0: float, max_shell: int = 4) -> list[Shell]:
    """Zero-field shells of the two-dimensional harmonic oscillator.

    Shell `k` lies at `k hbar_omega0` and holds the `k` orbitals with
    `2n + |l| + 1 = k`.

    Args:
        hbar_omega0: Level spacing (meV).
        max_shell: Number of shells to return.

    Returns:
        Shells `1..max_shell` in increasing energy.
    """
    if hbar_omega0 <= 0:
        raise ValueError(f'Level spacing must be positive. Got {hbar_omega0}.')
    if max_shell < 1:
        raise ValueError(f'Max shell must be >= 1. Got {max_shell}.')
    shells = []
    for k in range(max_shell):
        numbers = tuple(
            (n, ell)
            for n in range(k // 2 + 1)
            for ell in sorted({k - 2 * n, -(k - 2 * n)})
        )
        shells.append(
            Shell(
                index=k + 1,
                energy=(k + 1) * hbar_omega0,
                orbital_degeneracy=len(numbers),
                quantum_numbers=numbers,
            ),
        )
    return shells


def charging_energy(
    confinement_length: float,
    epsilon_r: float,
    estimator: ChargingEstimator | str = (
        ChargingEstimator.INTERACTION_INTEGRAL
    ),
    *,
    gate_radius: float | None = None,
) -> float:
    """Charging energy of the dot (meV).

    Args:
        confinement_length: Oscillator length (nm).
        epsilon_r: Relative permittivity around the dot.
        estimator: Which estimate to evaluate.
        gate_radius: Disk radius for the self-capacitance estimate (nm).

    Raises:
        ValueError: If a length or the permittivity is not positive, or
            `gate_radius` is missing for the disk estimate.
    """
    if epsilon_r <= 0:
        raise ValueError(f'Permittivity must be positive. Got {epsilon_r}.')
    estimator = ChargingEstimator(estimator)
    if estimator is ChargingEstimator.INTERACTION_INTEGRAL:
        if confinement_length <= 0:
            raise ValueError('Confinement length must be positive.')
        return (
            math.sqrt(math.pi / 2)
            * COULOMB_ENERGY
            / (epsilon_r * confinement_length)
        )
    if gate_radius is None or gate_radius <= 0:
        raise ValueError('Disk estimate needs a positive gate radius.')
    # e^2 / (8 epsilon_0 epsilon_r R)
    return math.pi / 2 * COULOMB_ENERGY / (epsilon_r * gate_radius)


def compute_spectrum(
    field: PotentialField,
    *,
    window: float | None = None,
    max_shell: int = 4,
) -> DotSpectrum:
    """Characterize the dot formed in a solved field.

    Args:
        field: Converged field.
        window: Fit window (nm). Chosen automatically by default.
        max_shell: Number of shells to list.

    Raises:
        FitError: If the fit fails or the profile does not confine
            electrons.
        NotConvergedError: If the field did not converge.
    """
    device = field.mesh.device
    if device is None:
        raise ValueError('Field mesh was not generated for a device.')
    material = device.well.material
    profile = extract_profile(field)
    fit = fit_parabola(
        profile,
        window,
        electron_mass=material.electron_mass,
    )
    if fit.curvature <= 0:
        raise FitError(
            f'Profile at V_gate={field.gate_bias} V does not confine '
            f'electrons (curvature {fit.curvature:.4g} meV/nm^2).',
        )
    spacing = hbar_omega0(fit.curvature, material.electron_mass)
    length = confinement_length(spacing, material.electron_mass)
    epsilon_r = material.static_dielectric_constant
    return DotSpectrum(
        gate_bias=field.gate_bias,
        curvature=fit.curvature,
        hbar_omega0=spacing,
        confinement_length=length,
        levels=tuple(fock_darwin_levels(spacing, max_shell)),
        ground_state_energy_absolute=profile.minimum + spacing,
        charging_energy=charging_energy(length, epsilon_r),
        disk_charging_energy=charging_energy(
            length,
            epsilon_r,
            ChargingEstimator.DISK_SELF_CAPACITANCE,
            gate_radius=device.gate_radius,
        ),
        fit=fit,
    )
