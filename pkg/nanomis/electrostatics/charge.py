"""Zero-temperature carrier statistics of the quantum well.

Band edges are measured from the Fermi level in eV. A single subband per
carrier type is occupied so the sheet density is the two-dimensional
density of states times the depth of the Fermi level inside the band.
"""
from __future__ import annotations

import dataclasses

import numpy as np
from numpy.typing import ArrayLike
from numpy.typing import NDArray

from nanomis.device.constants import ELEMENTARY_CHARGE
from nanomis.device.materials import MaterialParams
from nanomis.electrostatics.exceptions import ChargeModelError

ElectronModel = str
ELECTRON_MODELS = ('thomas_fermi', 'none')
"""Electron statistics: zero-temperature Thomas-Fermi or no electrons."""


def smoothed_ramp(
    x: NDArray[np.float64],
    width: float,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Continuously differentiable version of `max(x, 0)`.

    The kink at zero is replaced by a parabola on `(-width, width)`. With
    `width == 0` the exact ramp is returned.

    Returns:
        Tuple of the ramp value and its slope.
    """
    if width <= 0:
        return np.maximum(x, 0.0), (x > 0).astype(np.float64)
    value = np.where(
        x >= width,
        x,
        np.where(x <= -width, 0.0, (x + width) ** 2 / (4 * width)),
    )
    slope = np.where(
        x >= width,
        1.0,
        np.where(x <= -width, 0.0, (x + width) / (2 * width)),
    )
    return value, slope


def sheet_densities(
    conduction_band_edge: NDArray[np.float64],
    valence_band_edge: NDArray[np.float64],
    material: MaterialParams,
    *,
    smoothing: float = 0.0,
    electrons: ElectronModel = 'thomas_fermi',
) -> tuple[
    NDArray[np.float64],
    NDArray[np.float64],
    NDArray[np.float64],
    NDArray[np.float64],
]:
    """Carrier sheet densities and their derivative by the potential.

    Args:
        conduction_band_edge: Conduction band edge (eV).
        valence_band_edge: Valence band edge (eV).
        material: Well material.
        smoothing: Half width of the smoothed band edge onset (eV).
        electrons: Electron statistics model.

    Returns:
        Electron and hole sheet densities (cm^-2), then their derivatives
        with respect to the electrostatic potential (cm^-2 V^-1). Raising
        the potential lowers both band edges.
    """
    if electrons not in ELECTRON_MODELS:
        raise ValueError(f'Unknown electron model {electrons!r}.')
    g_e = material.electron_density_of_states * 1e3
    g_h = material.hole_density_of_states * 1e3
    holes, hole_slope = smoothed_ramp(valence_band_edge, smoothing)
    p = g_h * holes
    dp = -g_h * hole_slope
    if electrons == 'none':
        n = np.zeros_like(p)
        dn = np.zeros_like(p)
    else:
        occupied, electron_slope = smoothed_ramp(
            -conduction_band_edge,
            smoothing,
        )
        n = g_e * occupied
        dn = g_e * electron_slope
    return n, p, dn, dp


@dataclasses.dataclass(frozen=True, eq=False)
class ChargeState:
    """Carrier densities on the mesh nodes.

    Attributes:
        electron_sheet_density: Electron sheet density per node (cm^-2).
            Zero away from the quantum well.
        hole_sheet_density: Hole sheet density per node (cm^-2).
        ionized_acceptor_density: Ionized acceptor sheet density (cm^-2).
        net_volume_charge: Net charge density per node (C/m^3).
        well_mask: Nodes evaluated with the quantum well statistics.
    """

    electron_sheet_density: NDArray[np.float64]
    hole_sheet_density: NDArray[np.float64]
    ionized_acceptor_density: float
    net_volume_charge: NDArray[np.float64]
    well_mask: NDArray[np.bool_]

    def net_sheet_density(self) -> NDArray[np.float64]:
        """Net positive sheet density `p - n - N_A` per node (cm^-2)."""
        net = (
            self.hole_sheet_density
            - self.electron_sheet_density
            - self.ionized_acceptor_density
        )
        return np.where(self.well_mask, net, 0.0)


def charge_density(
    conduction_band_edge: ArrayLike,
    valence_band_edge: ArrayLike,
    material: MaterialParams,
    acceptor_sheet_density: float,
    well_thickness: float,
    *,
    well_mask: ArrayLike | None = None,
    smoothing: float = 0.0,
    electrons: ElectronModel = 'thomas_fermi',
) -> ChargeState:
    """Evaluate the well charge for given band edges.

    Args:
        conduction_band_edge: Conduction band edge per node (eV).
        valence_band_edge: Valence band edge per node (eV).
        material: Quantum well material.
        acceptor_sheet_density: Ionized acceptor sheet density (cm^-2).
        well_thickness: Thickness the sheet charge is spread over (nm).
        well_mask: Nodes inside the well. Defaults to every node.
        smoothing: Half width of the smoothed band edge onset (eV).
        electrons: Electron statistics model.

    Returns:
        Charge state with zero carriers outside `well_mask`.

    Raises:
        ChargeModelError: If a band edge inside the well is not finite.
    """
    ec = np.asarray(conduction_band_edge, dtype=np.float64)
    ev = np.asarray(valence_band_edge, dtype=np.float64)
    if ec.shape != ev.shape:
        raise ValueError('Band edge arrays must have the same shape.')
    mask = (
        np.ones(ec.shape, dtype=bool)
        if well_mask is None
        else np.asarray(well_mask, dtype=bool)
    )
    if not (np.all(np.isfinite(ec[mask])) and np.all(np.isfinite(ev[mask]))):
        raise ChargeModelError('Band edges missing on quantum well nodes.')

    n = np.zeros(ec.shape)
    p = np.zeros(ec.shape)
    n[mask], p[mask], _, _ = sheet_densities(
        ec[mask],
        ev[mask],
        material,
        smoothing=smoothing,
        electrons=electrons,
    )
    net = np.where(mask, p - n - acceptor_sheet_density, 0.0)
    # cm^-2 spread over the well thickness in nm gives C/m^3.
    rho = ELEMENTARY_CHARGE * net * 1e4 / (well_thickness * 1e-9)
    return ChargeState(
        electron_sheet_density=n,
        hole_sheet_density=p,
        ionized_acceptor_density=acceptor_sheet_density,
        net_volume_charge=rho,
        well_mask=mask,
    )
