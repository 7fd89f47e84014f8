"""Gate bias sweeps."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from nanomis.device.mesh import Mesh
from nanomis.electrostatics.solver import newton_solve
from nanomis.electrostatics.solver import PotentialField
from nanomis.electrostatics.solver import SolverOptions

logger = logging.getLogger(__name__)


def bias_sweep(
    mesh: Mesh,
    biases: Sequence[float],
    options: SolverOptions | None = None,
    *,
    initial_guess: PotentialField | None = None,
    workers: int = 1,
) -> list[PotentialField]:
    """Solve the electrostatics over an ordered list of gate biases.

    Sequential sweeps start each point from the last converged solution.
    With more than one worker the points are solved independently from
    zero potential in a thread pool.

    Args:
        mesh: Device mesh.
        biases: Gate biases in increasing or decreasing order (V).
        options: Solver options.
        initial_guess: Starting point of the first solve.
        workers: Number of threads.

    Returns:
        One field per bias in input order. Points that did not converge
        are included with `converged=False`.

    Raises:
        ValueError: If the biases are not monotonic or `workers < 1`.
    """
    steps = np.diff(np.asarray(biases, dtype=np.float64))
    if not (np.all(steps >= 0) or np.all(steps <= 0)):
        raise ValueError('Sweep biases must be monotonic.')
    if workers < 1:
        raise ValueError(f'Workers must be >= 1. Got {workers}.')

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            fields = list(
                pool.map(
                    lambda bias: newton_solve(mesh, bias, options=options),
                    biases,
                ),
            )
    else:
        fields = []
        guess = initial_guess
        for bias in biases:
            field = newton_solve(mesh, bias, guess, options)
            fields.append(field)
            if field.converged:
                guess = field

    failed = sum(not field.converged for field in fields)
    if failed > 0:
        logger.warning(
            f'{failed} of {len(fields)} sweep point(s) did not converge',
        )
    return fields
