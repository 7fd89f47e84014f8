"""End-to-end characterization of the electrostatic dot."""
from __future__ import annotations

import dataclasses
import logging
from typing import Any

import numpy as np

from nanomis.device.mesh import Mesh
from nanomis.electrostatics.exceptions import NotConvergedError
from nanomis.electrostatics.solver import SolverOptions
from nanomis.qdot.exceptions import BracketError
from nanomis.qdot.exceptions import FitError
from nanomis.qdot.search import DEFAULT_ALIGNMENT_BRACKET
from nanomis.qdot.search import DEFAULT_TOLERANCE
from nanomis.qdot.search import find_alignment_bias
from nanomis.qdot.search import find_onset_bias
from nanomis.qdot.search import lever_arm
from nanomis.qdot.search import SEARCH_OPTIONS
from nanomis.qdot.search import spectrum_sweep
from nanomis.qdot.spectrum import DotSpectrum

logger = logging.getLogger(__name__)

ESTIMATE_NOTE = (
    'Charging energies are order-of-magnitude estimates; the lever arm is '
    'the differential lever arm between alignment and onset.'
)


@dataclasses.dataclass
class DotReport:
    """Summary of the dot at the alignment and onset biases.

    Fields whose computation failed are `None` and the reason is recorded
    in `errors` under the field name.

    Attributes:
        v_align: Alignment bias (V).
        v_onset: Single-electron onset bias (V).
        spectrum: Dot spectrum at the alignment bias.
        lever_arm: Differential lever arm between alignment and onset.
        lever_points: Biases used for the lever arm (V).
        errors: Failure message per field.
        notes: Caveats on the reported estimates.
    """

    v_align: float | None = None
    v_onset: float | None = None
    spectrum: DotSpectrum | None = None
    lever_arm: float | None = None
    lever_points: list[float] = dataclasses.field(default_factory=list)
    errors: dict[str, str] = dataclasses.field(default_factory=dict)
    notes: list[str] = dataclasses.field(
        default_factory=lambda: [ESTIMATE_NOTE],
    )
    failures: dict[str, type[Exception]] = dataclasses.field(
        default_factory=dict,
        repr=False,
    )

    def record(self, name: str, error: Exception) -> None:
        """Record why a field could not be computed."""
        logger.error(f'Could not compute {name}: {error}')
        self.errors[name] = str(error)
        self.failures[name] = type(error)

    def to_dict(self) -> dict[str, Any]:
        """Flat dictionary form for the JSON report."""
        s = self.spectrum
        return {
            'hbar_omega0_meV': None if s is None else s.hbar_omega0,
            'curvature': None if s is None else s.curvature,
            'fit_residual': None if s is None else s.fit.rms_residual,
            'l0_nm': None if s is None else s.confinement_length,
            'charging_energy_meV': {
                'interaction_integral': (
                    None if s is None else s.charging_energy
                ),
                'disk_self_capacitance': (
                    None if s is None else s.disk_charging_energy
                ),
            },
            'v_align_V': self.v_align,
            'v_onset_V': self.v_onset,
            'lever_arm': self.lever_arm,
            'fit_window_nm': None if s is None else s.fit.window,
            'levels_meV': [] if s is None else list(s.levels),
            'lever_points_V': self.lever_points,
            'errors': self.errors,
            'notes': self.notes,
        }


def lever_biases(
    v_align: float,
    v_onset: float | None,
    steps: int = 3,
    fallback_step: float = 0.01,
) -> list[float]:
    """Biases of the lever arm sweep.

    The sweep spans `steps` bias steps on each side of its centre. With
    an onset above the alignment the sweep is centred between the two
    biases and its ends land on them. Otherwise it is centred on the
    alignment bias with `fallback_step` spacing.

    Args:
        v_align: Alignment bias (V).
        v_onset: Onset bias (V) or `None`.
        steps: Steps on each side of the centre.
        fallback_step: Step without a usable onset (V).
    """
    if steps < 1:
        raise ValueError(f'Lever arm needs steps >= 1. Got {steps}.')
    if v_onset is not None and v_onset > v_align:
        centre = 0.5 * (v_align + v_onset)
        step = (v_onset - v_align) / (2 * steps)
    else:
        centre, step = v_align, fallback_step
    offsets = np.arange(-steps, steps + 1)
    return [float(v) for v in centre + step * offsets]


def characterize(
    mesh: Mesh,
    *,
    alignment_bracket: tuple[float, float] = DEFAULT_ALIGNMENT_BRACKET,
    onset_upper: float | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
    options: SolverOptions = SEARCH_OPTIONS,
    lever_steps: int = 3,
    window: float | None = None,
) -> DotReport:
    """Find the alignment and onset biases, the spectrum and lever arm.

    Args:
        mesh: Device mesh.
        alignment_bracket: Bracket of the alignment search (V).
        onset_upper: Upper end of the onset bracket (V). Defaults to the
            upper end of `alignment_bracket`.
        tolerance: Energy tolerance of the searches (meV).
        options: Solver options.
        lever_steps: Sweep steps on each side of the lever arm centre.
        window: Confinement fit window (nm). Automatic by default.

    Returns:
        The report. Parts that fail are recorded in `errors`.
    """
    report = DotReport()
    upper = alignment_bracket[1] if onset_upper is None else onset_upper
    expected = (BracketError, FitError, NotConvergedError)

    try:
        report.v_align = find_alignment_bias(
            mesh,
            alignment_bracket,
            tolerance=tolerance,
            options=options,
        )
    except expected as e:
        report.record('v_align', e)
        for name in ('v_onset', 'spectrum', 'lever_arm'):
            report.record(name, type(e)('alignment bias is unavailable'))
        return report

    try:
        report.v_onset = find_onset_bias(
            mesh,
            (report.v_align, upper),
            tolerance=tolerance,
            options=options,
            window=window,
        )
    except expected as e:
        report.record('v_onset', e)

    report.lever_points = lever_biases(
        report.v_align,
        report.v_onset,
        lever_steps,
    )

    try:
        points = spectrum_sweep(
            mesh,
            report.lever_points,
            options=options,
            window=window,
        )
    except expected as e:
        report.record('spectrum', e)
        report.record('lever_arm', e)
        return report

    nearest = min(points, key=lambda point: abs(point[0] - report.v_align))
    report.spectrum = nearest[1]
    try:
        report.lever_arm = lever_arm(points)
    except ValueError as e:
        report.record('lever_arm', e)
    return report
