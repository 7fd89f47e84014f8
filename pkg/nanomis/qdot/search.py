"""Gate bias searches and the lever arm of the dot.

Two biases characterize the device: the alignment bias, where the
conduction band on the well mid-plane reaches the Fermi level, and the
onset bias, where the lowest dot level does. Both are found by bisection
on a monotonically decreasing energy. Between the two biases the
Thomas-Fermi electrons that collect under the gate screen it, which sets
the lever arm of the dot.
"""
from __future__ import annotations

import logging
import math
from typing import Callable
from typing import Sequence

from scipy import stats

from nanomis.device.mesh import Mesh
from nanomis.electrostatics.exceptions import NotConvergedError
from nanomis.electrostatics.solver import newton_solve
from nanomis.electrostatics.solver import PotentialField
from nanomis.electrostatics.solver import SolverOptions
from nanomis.qdot.exceptions import BracketError
from nanomis.qdot.profile import extract_profile
from nanomis.qdot.spectrum import compute_spectrum
from nanomis.qdot.spectrum import DotSpectrum

logger = logging.getLogger(__name__)

SEARCH_OPTIONS = SolverOptions()
"""Solver options for searches."""

DEFAULT_ALIGNMENT_BRACKET = (1.5, 3.5)
"""Gate biases bracketing the alignment bias of the reference device (V)."""

DEFAULT_TOLERANCE = 0.05
"""Energy tolerance of the bias searches (meV)."""


def bisect_bias(
    objective: Callable[[float], float],
    bracket: tuple[float, float],
    tolerance: float,
    *,
    max_iterations: int = 100,
    bias_tolerance: float = 1e-9,
) -> float:
    """Find the bias where a monotonic objective crosses zero.

    Args:
        objective: Energy at a bias (meV).
        bracket: Lower and upper bias (V).
        tolerance: Stop once `|objective| < tolerance` (meV).
        max_iterations: Bisection step limit.
        bias_tolerance: Stop once the bracket is narrower than this (V).

    Returns:
        The bias (V).

    Raises:
        BracketError: If the objective has the same sign at both ends.
    """
    low, high = bracket
    if not low < high:
        raise ValueError(f'Bracket must be increasing. Got {bracket}.')
    f_low = objective(low)
    if abs(f_low) < tolerance:
        return low
    f_high = objective(high)
    if abs(f_high) < tolerance:
        return high
    if math.copysign(1, f_low) == math.copysign(1, f_high):
        raise BracketError(
            f'Objective does not change sign over [{low}, {high}] V '
            f'({f_low:.4g} and {f_high:.4g} meV).',
        )

    middle = 0.5 * (low + high)
    for _ in range(max_iterations):
        middle = 0.5 * (low + high)
        f_middle = objective(middle)
        logger.debug(
            f'Bisection at {middle:.6f} V: objective {f_middle:.5g} meV',
        )
        if abs(f_middle) < tolerance:
            return middle
        if math.copysign(1, f_middle) == math.copysign(1, f_low):
            low, f_low = middle, f_middle
        else:
            high = middle
        if high - low < bias_tolerance:
            break
    logger.warning(
        f'Bisection stopped at {middle:.9f} V before reaching the '
        f'{tolerance} meV tolerance',
    )
    return middle


class _WarmStartSolver:
    """Solve at arbitrary biases starting from the nearest solution."""

    def __init__(self, mesh: Mesh, options: SolverOptions) -> None:
        self.mesh = mesh
        self.options = options
        self.solved: list[PotentialField] = []

    def __call__(self, gate_bias: float) -> PotentialField:
        guess = min(
            self.solved,
            key=lambda field: abs(field.gate_bias - gate_bias),
            default=None,
        )
        field = newton_solve(self.mesh, gate_bias, guess, self.options)
        if not field.converged:
            raise NotConvergedError(
                f'Electrostatics did not converge at V_gate={gate_bias} V.',
            )
        self.solved.append(field)
        return field


def find_alignment_bias(
    mesh: Mesh,
    bracket: tuple[float, float] = DEFAULT_ALIGNMENT_BRACKET,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
    options: SolverOptions = SEARCH_OPTIONS,
) -> float:
    """Bias where the mid-plane conduction band minimum meets the Fermi level.

    Raises:
        BracketError: If the bracket does not enclose the alignment.
        NotConvergedError: If a solve along the way fails.
    """
    solve = _WarmStartSolver(mesh, options)
    bias = bisect_bias(
        lambda v: extract_profile(solve(v)).minimum,
        bracket,
        tolerance,
    )
    logger.info(f'Alignment bias V_align={bias:.4f} V')
    return bias


def find_onset_bias(
    mesh: Mesh,
    bracket: tuple[float, float],
    *,
    tolerance: float = DEFAULT_TOLERANCE,
    options: SolverOptions = SEARCH_OPTIONS,
    window: float | None = None,
) -> float:
    """Bias where the dot ground state meets the Fermi level.

    Args:
        mesh: Device mesh.
        bracket: Bias bracket, usually starting at the alignment bias (V).
        tolerance: Energy tolerance (meV).
        options: Solver options.
        window: Confinement fit window (nm).

    Raises:
        BracketError: If the bracket does not enclose the onset.
        FitError: If the confinement cannot be fitted along the way.
        NotConvergedError: If a solve along the way fails.
    """
    solve = _WarmStartSolver(mesh, options)
    bias = bisect_bias(
        lambda v: compute_spectrum(
            solve(v),
            window=window,
        ).ground_state_energy_absolute,
        bracket,
        tolerance,
    )
    logger.info(f'Single-electron onset bias V_onset={bias:.4f} V')
    return bias


def spectrum_sweep(
    mesh: Mesh,
    biases: Sequence[float],
    *,
    options: SolverOptions = SEARCH_OPTIONS,
    window: float | None = None,
) -> list[tuple[float, DotSpectrum]]:
    """Dot spectra over a list of biases with warm starts.

    Raises:
        FitError: If the confinement cannot be fitted.
        NotConvergedError: If a solve fails.
    """
    solve = _WarmStartSolver(mesh, options)
    return [
        (bias, compute_spectrum(solve(bias), window=window))
        for bias in biases
    ]


def lever_arm_from_energies(
    biases: Sequence[float],
    energies: Sequence[float],
) -> float:
    """Gate bias change per unit of dot level shift.

    Args:
        biases: Gate biases (V).
        energies: Dot ground state energies (meV).

    Returns:
        Inverse of the absolute slope of energy in eV against bias in V.

    Raises:
        ValueError: If fewer than two points are given or the energy does
            not change with bias.
    """
    if len(biases) != len(energies) or len(biases) < 2:
        raise ValueError('Lever arm needs at least two matching points.')
    if len(set(biases)) < 2:
        raise ValueError('Lever arm needs at least two distinct biases.')
    slope = stats.linregress(
        list(biases),
        [energy * 1e-3 for energy in energies],
    ).slope
    if slope == 0 or not math.isfinite(slope):
        raise ValueError('Dot energy does not change with bias.')
    return abs(1 / slope)


def lever_arm(points: Sequence[tuple[float, DotSpectrum]]) -> float:
    """Lever arm from `(bias, spectrum)` pairs."""
    return lever_arm_from_energies(
        [bias for bias, _ in points],
        [spectrum.ground_state_energy_absolute for _, spectrum in points],
    )
