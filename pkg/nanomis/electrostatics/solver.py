"""Self-consistent nonlinear Poisson solver.

The well charge depends on the potential through the zero-temperature
carrier statistics, so the discrete system `K V = (e / epsilon_0) q(V)` is
solved with a damped Newton iteration. The well holds one two-dimensional
gas per radial column: its sheet density follows the band edge on the
well mid-plane and is spread evenly over the well thickness. Each well
node therefore couples to the two nodes that bracket the mid-plane of its
column, and the Jacobian `K - (e / epsilon_0) dq/dV` is not symmetric.
The band edge onsets are smoothed over a small width so the Jacobian is
continuous.
"""
from __future__ import annotations

import dataclasses
import logging
import sys

import numpy as np
from numpy.typing import NDArray
from scipy import sparse
from scipy.sparse import linalg

if sys.version_info >= (3, 11):  # pragma: >=3.11 cover
    from typing import Self
else:  # pragma: <3.11 cover
    from typing_extensions import Self

from nanomis.device.constants import CHARGE_OVER_PERMITTIVITY
from nanomis.device.constants import CM2_TO_NM2
from nanomis.device.constants import ELEMENTARY_CHARGE
from nanomis.device.mesh import Mesh
from nanomis.device.structure import DeviceSpec
from nanomis.device.structure import LayerRole
from nanomis.electrostatics.assemble import check_connectivity
from nanomis.electrostatics.assemble import dirichlet_values
from nanomis.electrostatics.assemble import stiffness_matrix
from nanomis.electrostatics.charge import charge_density
from nanomis.electrostatics.charge import ChargeState
from nanomis.electrostatics.charge import ELECTRON_MODELS
from nanomis.electrostatics.charge import sheet_densities

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class SolverOptions:
    """Newton iteration controls.

    Attributes:
        tolerance: Relative residual at which the iteration stops.
        max_iterations: Newton iteration limit.
        smoothing: Half width of the smoothed band edge onset (meV).
        electrons: `'thomas_fermi'` for zero-temperature electron
            statistics or `'none'` to keep the dot empty.
        max_update: Largest potential change per Newton step (V).
        min_damping: Smallest step fraction tried by the line search.
    """

    tolerance: float = 1e-10
    max_iterations: int = 100
    smoothing: float = 0.1
    electrons: str = 'thomas_fermi'
    max_update: float = 1.0
    min_damping: float = 2.0**-20

    def __post_init__(self) -> None:
        if not self.tolerance > 0:
            raise ValueError('Tolerance must be positive.')
        if self.max_iterations < 1:
            raise ValueError('Max iterations must be >= 1.')
        if self.smoothing < 0:
            raise ValueError('Smoothing width must be non-negative.')
        if self.electrons not in ELECTRON_MODELS:
            raise ValueError(
                f'Electron model must be one of {ELECTRON_MODELS}. '
                f'Got {self.electrons!r}.',
            )
        if not self.max_update > 0:
            raise ValueError('Max update must be positive.')
        if not 0 < self.min_damping <= 1:
            raise ValueError('Min damping must be in (0, 1].')

    def replace(self, **changes: object) -> Self:
        """Copy of the options with some fields changed."""
        return dataclasses.replace(self, **changes)


@dataclasses.dataclass(frozen=True)
class ElectrodeCharges:
    """Charge balance of a solution in units of e.

    Attributes:
        gate: Charge induced on the gate electrode.
        substrate: Charge induced on the substrate plane.
        semiconductor: Net charge in the quantum well.
    """

    gate: float
    substrate: float
    semiconductor: float

    @property
    def imbalance(self) -> float:
        """Total charge relative to the largest contribution."""
        scale = max(
            abs(self.gate),
            abs(self.substrate),
            abs(self.semiconductor),
        )
        total = self.gate + self.substrate + self.semiconductor
        return 0.0 if scale == 0 else abs(total) / scale


@dataclasses.dataclass(frozen=True, eq=False)
class PotentialField:
    """Solution of the self-consistent electrostatics at one bias.

    Attributes:
        mesh: Mesh the field is defined on.
        gate_bias: Gate bias (V).
        potential: Electrostatic potential per node (V).
        conduction_band_edge: Conduction band edge per node relative to
            the Fermi level (eV). NaN on nodes without semiconductor.
        valence_band_edge: Valence band edge per node (eV).
        charge: Carrier densities evaluated with the solver's smoothing.
        converged: Whether the relative residual reached the tolerance.
        residual_norm: Final relative residual.
        newton_iterations: Newton iterations taken.
        residual_history: Absolute residual norm after each iteration,
            starting with the initial guess.
        options: Solver options used.
    """

    mesh: Mesh
    gate_bias: float
    potential: NDArray[np.float64]
    conduction_band_edge: NDArray[np.float64]
    valence_band_edge: NDArray[np.float64]
    charge: ChargeState
    converged: bool
    residual_norm: float
    newton_iterations: int
    residual_history: tuple[float, ...]
    options: SolverOptions

    def well_midplane_conduction_band_edge(self) -> NDArray[np.float64]:
        """Conduction band edge on the well mid-plane per radial node (eV)."""
        k, weight = self.mesh.well_midplane()
        edge = self.conduction_band_edge
        return (1 - weight) * edge[:, k] + weight * edge[:, k + 1]

    def min_conduction_band_edge(self) -> float:
        """Lowest conduction band edge on the well mid-plane (eV)."""
        return float(np.min(self.well_midplane_conduction_band_edge()))

    def well_sheet_densities(
        self,
    ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Electron and hole sheet densities per radial node (cm^-2)."""
        mask = self.charge.well_mask
        electrons = np.where(mask, self.charge.electron_sheet_density, 0.0)
        holes = np.where(mask, self.charge.hole_sheet_density, 0.0)
        return electrons.max(axis=1), holes.max(axis=1)

    def electron_count(self) -> float:
        """Number of electrons in the well."""
        volumes = self.mesh.control_volumes(
            self.mesh.region_mask('quantum_well'),
        )
        thickness = _require_device(self.mesh).well.thickness
        return float(
            np.sum(
                self.charge.electron_sheet_density
                * CM2_TO_NM2
                * volumes
                / thickness,
            ),
        )

    def electrode_charges(self) -> ElectrodeCharges:
        """Gauss-law charge balance between electrodes and the well."""
        stiffness = stiffness_matrix(self.mesh)
        flux = (stiffness @ self.potential.ravel()).reshape(self.mesh.shape)
        flux = flux / CHARGE_OVER_PERMITTIVITY
        gate = self.mesh.gate_node_mask()
        substrate = np.zeros(self.mesh.shape, dtype=bool)
        substrate[:, 0] = True
        volumes = self.mesh.control_volumes(
            self.mesh.region_mask('quantum_well'),
        )
        semiconductor = np.sum(
            self.charge.net_volume_charge * volumes * 1e-27,
        )
        return ElectrodeCharges(
            gate=float(np.sum(flux[gate])),
            substrate=float(np.sum(flux[substrate])),
            semiconductor=float(semiconductor / ELEMENTARY_CHARGE),
        )


def band_parameters(
    mesh: Mesh,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Conduction band offset and band gap of each node's material (eV).

    Nodes without semiconductor get NaN.
    """
    device = _require_device(mesh)
    material_of = mesh.node_semiconductor()
    offset = np.full(mesh.shape, np.nan)
    gap = np.full(mesh.shape, np.nan)
    for role in (
        LayerRole.GATE_DIELECTRIC,
        LayerRole.QUANTUM_WELL,
        LayerRole.BUFFER,
    ):
        material = device.layer(role).material
        here = material_of == mesh.region_names.index(role.value)
        offset[here] = material.conduction_band_edge_offset
        gap[here] = material.bandgap
    return offset, gap


def newton_solve(
    mesh: Mesh,
    gate_bias: float,
    initial_guess: PotentialField | NDArray[np.float64] | None = None,
    options: SolverOptions | None = None,
) -> PotentialField:
    """Solve the self-consistent electrostatics at a gate bias.

    Args:
        mesh: Mesh generated for a device.
        gate_bias: Gate bias (V).
        initial_guess: Previous solution or potential array to start from.
            Defaults to zero potential on the free nodes.
        options: Solver options.

    Returns:
        The field. Check `converged` before using it: a solve that hits
        the iteration limit or cannot reduce the residual returns its last
        iterate with `converged=False`.

    Raises:
        AssemblyError: If the discrete system is singular.
        ValueError: If the mesh has no device or the guess has the wrong
            shape.
    """
    options = SolverOptions() if options is None else options
    device = _require_device(mesh)
    well = device.well.material

    stiffness = stiffness_matrix(mesh)
    mask, values = dirichlet_values(mesh, gate_bias)
    fixed = np.flatnonzero(mask.ravel())
    free = np.flatnonzero(~mask.ravel())
    check_connectivity(stiffness, fixed)
    k_ff = stiffness[free][:, free].tocsr()
    k_fd = stiffness[free][:, fixed]
    fixed_values = values.ravel()[fixed]
    boundary = k_fd @ fixed_values

    volumes = mesh.control_volumes(mesh.region_mask('quantum_well'))
    volumes = volumes.ravel()[free]
    in_well = volumes > 0
    scale = (
        CHARGE_OVER_PERMITTIVITY
        * CM2_TO_NM2
        * volumes[in_well]
        / device.well.thickness
    )
    ec_flat = device.band_reference + well.conduction_band_edge_offset
    smoothing = options.smoothing * 1e-3
    acceptors = scale * device.acceptor_sheet_density

    nz = mesh.shape[1]
    k_mid, w_mid = mesh.well_midplane()
    position = np.full(mesh.node_count, -1)
    position[free] = np.arange(len(free))
    columns = np.arange(mesh.shape[0]) * nz
    lower = position[columns + k_mid]
    upper = position[columns + k_mid + 1]
    if np.any(lower < 0) or np.any(upper < 0):
        raise ValueError('Quantum well mid-plane touches a fixed node.')
    well_rows = np.flatnonzero(in_well)
    well_column = free[well_rows] // nz
    coupling_rows = np.concatenate([well_rows, well_rows])
    coupling_cols = np.concatenate(
        [lower[well_column], upper[well_column]],
    )

    def evaluate(
        v_free: NDArray[np.float64],
    ) -> tuple[NDArray[np.float64], sparse.csr_matrix, float]:
        v_mid = (1 - w_mid) * v_free[lower] + w_mid * v_free[upper]
        n, p, dn, dp = sheet_densities(
            ec_flat - v_mid,
            ec_flat - well.bandgap - v_mid,
            well,
            smoothing=smoothing,
            electrons=options.electrons,
        )
        n, p = n[well_column], p[well_column]
        stiff = k_ff @ v_free
        residual = stiff + boundary
        residual[in_well] -= scale * (p - n) - acceptors
        slope = scale * (dn - dp)[well_column]
        derivative = sparse.csr_matrix(
            (
                np.concatenate([(1 - w_mid) * slope, w_mid * slope]),
                (coupling_rows, coupling_cols),
            ),
            shape=k_ff.shape,
        )
        norm_scale = (
            np.linalg.norm(stiff)
            + np.linalg.norm(boundary)
            + np.linalg.norm(scale * p)
            + np.linalg.norm(scale * n)
            + np.linalg.norm(acceptors)
        )
        return residual, derivative, max(norm_scale, 1e-30)

    v_free = _initial_potential(mesh, initial_guess).ravel()[free]
    residual, derivative, norm_scale = evaluate(v_free)
    norm = float(np.linalg.norm(residual))
    history = [norm]
    relative = norm / norm_scale
    iterations = 0
    stalled = False

    while relative > options.tolerance and iterations < options.max_iterations:
        iterations += 1
        jacobian = (k_ff + derivative).tocsc()
        step = linalg.spsolve(jacobian, -residual)
        largest = float(np.max(np.abs(step))) if len(step) > 0 else 0.0
        damping = min(1.0, options.max_update / largest) if largest else 1.0

        while True:
            trial = v_free + damping * step
            t_residual, t_derivative, t_scale = evaluate(trial)
            t_norm = float(np.linalg.norm(t_residual))
            if t_norm < norm:
                break
            damping /= 2
            if damping < options.min_damping:
                stalled = True
                break
        if stalled:
            logger.warning(
                f'Line search stalled at V_gate={gate_bias:.6g} V after '
                f'{iterations} iteration(s) with relative residual '
                f'{relative:.3e}',
            )
            break

        v_free, residual, derivative = trial, t_residual, t_derivative
        norm, norm_scale = t_norm, t_scale
        relative = norm / norm_scale
        history.append(norm)
        logger.debug(
            f'Newton iteration {iterations}: relative residual '
            f'{relative:.3e}, damping {damping:.3g}',
        )

    converged = relative <= options.tolerance
    if not converged and not stalled:
        logger.warning(
            f'Newton iteration did not converge at V_gate={gate_bias:.6g} V '
            f'within {options.max_iterations} iterations (relative residual '
            f'{relative:.3e})',
        )

    potential = values.ravel().copy()
    potential[free] = v_free
    potential = potential.reshape(mesh.shape)
    offset, gap = band_parameters(mesh)
    conduction = device.band_reference + offset - potential
    valence = conduction - gap
    well_nodes = mesh.node_touches(mesh.region_mask('quantum_well'))
    midplane = (1 - w_mid) * conduction[:, k_mid]
    midplane = midplane + w_mid * conduction[:, k_mid + 1]
    midplane = np.broadcast_to(midplane[:, None], mesh.shape)
    charge = charge_density(
        np.where(well_nodes, midplane, 0.0),
        np.where(well_nodes, midplane - well.bandgap, 0.0),
        well,
        device.acceptor_sheet_density,
        device.well.thickness,
        well_mask=well_nodes,
        smoothing=smoothing,
        electrons=options.electrons,
    )
    logger.debug(
        f'Solved V_gate={gate_bias:.6g} V in {iterations} iteration(s) '
        f'(converged={converged}, relative residual {relative:.3e})',
    )
    return PotentialField(
        mesh=mesh,
        gate_bias=gate_bias,
        potential=potential,
        conduction_band_edge=conduction,
        valence_band_edge=valence,
        charge=charge,
        converged=converged,
        residual_norm=relative,
        newton_iterations=iterations,
        residual_history=tuple(history),
        options=options,
    )


def _initial_potential(
    mesh: Mesh,
    initial_guess: PotentialField | NDArray[np.float64] | None,
) -> NDArray[np.float64]:
    if initial_guess is None:
        return np.zeros(mesh.shape)
    if isinstance(initial_guess, PotentialField):
        guess = initial_guess.potential
    else:
        guess = np.asarray(initial_guess, dtype=np.float64)
    if guess.shape != mesh.shape:
        raise ValueError(
            f'Initial guess has shape {guess.shape} but the mesh has '
            f'{mesh.shape} nodes.',
        )
    return guess


def _require_device(mesh: Mesh) -> DeviceSpec:
    if mesh.device is None:
        raise ValueError('Mesh was not generated for a device.')
    return mesh.device

