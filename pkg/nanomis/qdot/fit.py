"""Parabolic fit of the confinement potential."""
from __future__ import annotations

import logging
import math
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike

from nanomis.device.constants import HBAR2_OVER_M0
from nanomis.qdot.exceptions import FitError
from nanomis.qdot.profile import ConfinementProfile

logger = logging.getLogger(__name__)

MIN_FIT_SAMPLES = 5
"""Fewest profile samples a fit window may contain."""

AUTO_WINDOW_FIRST_RISE = 50.0
"""Energy rise bounding the first pass of the automatic window (meV)."""


class ParabolaFit(NamedTuple):
    """Least-squares fit `E(r) = offset + curvature * r^2`.

    Attributes:
        curvature: Curvature (meV/nm^2).
        offset: Energy on the axis (meV).
        rms_residual: Root mean square residual of the fit (meV).
        window: Largest radius used (nm).
        samples: Number of profile samples used.
    """

    curvature: float
    offset: float
    rms_residual: float
    window: float
    samples: int


def least_squares_parabola(
    radii: ArrayLike,
    energies: ArrayLike,
) -> ParabolaFit:
    """Fit `offset + curvature * r^2` to samples.

    Raises:
        FitError: If there are fewer than `MIN_FIT_SAMPLES` samples or
            the samples do not determine both coefficients.
    """
    r = np.asarray(radii, dtype=np.float64)
    e = np.asarray(energies, dtype=np.float64)
    if len(r) < MIN_FIT_SAMPLES:
        raise FitError(
            f'Fit needs at least {MIN_FIT_SAMPLES} samples. Got {len(r)}.',
        )
    design = np.column_stack((np.ones_like(r), r**2))
    coefficients, _, rank, _ = np.linalg.lstsq(design, e, rcond=None)
    if rank < 2:
        raise FitError('Fit samples are degenerate.')
    offset, curvature = (float(c) for c in coefficients)
    residual = e - design @ coefficients
    return ParabolaFit(
        curvature=curvature,
        offset=offset,
        rms_residual=float(np.sqrt(np.mean(residual**2))),
        window=float(r.max()),
        samples=len(r),
    )


def fit_parabola(
    profile: ConfinementProfile,
    window: float | None = None,
    *,
    electron_mass: float = 0.045,
) -> ParabolaFit:
    """Fit the bottom of the confinement profile with a parabola.

    Args:
        profile: Mid-plane profile.
        window: Largest radius to include (nm). By default the window is
            chosen automatically: a first fit over the region rising at
            most `AUTO_WINDOW_FIRST_RISE` above the axis gives a level
            spacing, and the final fit uses the region rising at most two
            level spacings.
        electron_mass: Effective mass for the automatic window (m_0).

    Returns:
        The fit.

    Raises:
        FitError: If the window holds fewer than `MIN_FIT_SAMPLES`
            samples or the fit is degenerate.
    """
    if window is not None:
        if not window > 0:
            raise ValueError(f'Fit window must be positive. Got {window}.')
        return _fit_within(profile, window)

    first = _fit_within(profile, _rise_window(profile, AUTO_WINDOW_FIRST_RISE))
    if first.curvature <= 0:
        return first
    spacing = math.sqrt(2 * first.curvature * HBAR2_OVER_M0 / electron_mass)
    fit = _fit_within(profile, _rise_window(profile, 2 * spacing))
    logger.debug(
        f'Fitted curvature {fit.curvature:.5g} meV/nm^2 over '
        f'{fit.window:.3g} nm ({fit.samples} samples, rms '
        f'{fit.rms_residual:.3g} meV)',
    )
    return fit


def _rise_window(profile: ConfinementProfile, limit: float) -> float:
    above = np.flatnonzero(profile.rise() > limit)
    if len(above) == 0:
        return float(profile.radii[-1])
    return float(profile.radii[max(above[0] - 1, 0)])


def _fit_within(profile: ConfinementProfile, window: float) -> ParabolaFit:
    inside = profile.radii <= window * (1 + 1e-12)
    if int(np.sum(inside)) < MIN_FIT_SAMPLES:
        raise FitError(
            f'Fit window of {window:.4g} nm holds {int(np.sum(inside))} '
            f'samples, fewer than {MIN_FIT_SAMPLES}.',
        )
    fit = least_squares_parabola(
        profile.radii[inside],
        profile.energies[inside],
    )
    if not math.isfinite(fit.curvature):
        raise FitError('Fit curvature is not finite.')
    return fit
