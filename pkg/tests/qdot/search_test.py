from __future__ import annotations

import logging
from types import SimpleNamespace
from typing import Callable

import numpy as np
import pytest

from nanomis.device.mesh import Mesh
from nanomis.electrostatics.sweep import bias_sweep
from nanomis.qdot import search
from nanomis.qdot.exceptions import BracketError
from nanomis.qdot.profile import extract_profile
from nanomis.qdot.search import bisect_bias
from nanomis.qdot.search import find_alignment_bias
from nanomis.qdot.search import find_onset_bias
from nanomis.qdot.search import lever_arm
from nanomis.qdot.search import lever_arm_from_energies
from nanomis.qdot.search import SEARCH_OPTIONS
from testing.devices import slab_mesh
from testing.spectra import synthetic_spectrum


def test_bisect_linear_objective() -> None:
    bias = bisect_bias(lambda v: 200.0 * (2.4 - v), (1.5, 3.5), 0.05)
    assert abs(200.0 * (2.4 - bias)) < 0.05


def _power_law(
    root: float,
    slope: float,
    power: float,
    calls: list[float],
) -> Callable[[float], float]:
    def objective(v: float) -> float:
        calls.append(v)
        x = root - v
        return float(slope * np.sign(x) * abs(x) ** power)

    return objective


def test_bisect_random_monotonic_objectives() -> None:
    rng = np.random.default_rng(11)
    for _ in range(60):
        low = rng.uniform(-1.0, 2.0)
        high = low + rng.uniform(0.5, 3.0)
        root = rng.uniform(low, high)
        slope = rng.uniform(20.0, 500.0)
        power = rng.choice([1.0, 3.0])
        calls: list[float] = []
        objective = _power_law(root, slope, power, calls)

        tolerance = rng.uniform(0.01, 1.0)
        bias = bisect_bias(objective, (low, high), tolerance)
        assert low <= bias <= high
        assert abs(objective(bias)) < tolerance
        assert all(low <= v <= high for v in calls)


def test_bisect_endpoint_within_tolerance() -> None:
    assert bisect_bias(lambda v: 1.0 - v, (1.0, 2.0), 0.1) == 1.0
    assert bisect_bias(lambda v: 2.0 - v, (1.0, 2.0), 0.1) == 2.0


def test_bisect_same_sign() -> None:
    with pytest.raises(BracketError, match='does not change sign'):
        bisect_bias(lambda v: 5.0 - v, (1.0, 2.0), 0.1)


def test_bisect_bad_bracket() -> None:
    with pytest.raises(ValueError, match='increasing'):
        bisect_bias(lambda v: v, (2.0, 1.0), 0.1)


def test_bisect_discontinuous_objective(
    caplog: pytest.LogCaptureFixture,
) -> None:
    caplog.set_level(logging.WARNING)
    bias = bisect_bias(lambda v: 1.0 if v < 1.3 else -1.0, (1.0, 2.0), 0.5)
    assert bias == pytest.approx(1.3, abs=1e-8)
    assert any('Bisection stopped' in r.message for r in caplog.records)


def test_lever_arm_from_energies() -> None:
    biases = [2.0, 2.1, 2.2, 2.3]
    energies = [10.0 - 200.0 * (v - 2.0) for v in biases]
    assert lever_arm_from_energies(biases, energies) == pytest.approx(5.0)


@pytest.mark.parametrize(
    ('biases', 'energies'),
    (
        ([2.0], [1.0]),
        ([2.0, 2.1], [1.0]),
        ([2.0, 2.0], [1.0, 2.0]),
        ([2.0, 2.1, 2.2], [1.0, 1.0, 1.0]),
    ),
)
def test_lever_arm_invalid(biases: list[float], energies: list[float]) -> None:
    with pytest.raises(ValueError):
        lever_arm_from_energies(biases, energies)


def test_lever_arm_from_spectra() -> None:
    points = [
        (bias, synthetic_spectrum(bias, 20.0 - 250.0 * (bias - 2.0)))
        for bias in (2.0, 2.05, 2.1)
    ]
    assert lever_arm(points) == pytest.approx(4.0)


def test_alignment_bracket_too_low(coarse_mesh: Mesh) -> None:
    with pytest.raises(BracketError):
        find_alignment_bias(coarse_mesh, (0.0, 0.5))


def _piecewise_dot(
    monkeypatch: pytest.MonkeyPatch,
    root: float,
    coupling: float,
    spacing: float,
    screening: float,
) -> Callable[[float], float]:
    def minimum(v: float) -> float:
        slope = coupling * (1 - screening * (v > root))
        return float(slope * (root - v))

    monkeypatch.setattr(
        search,
        '_WarmStartSolver',
        lambda mesh, options: (lambda v: v),
    )
    monkeypatch.setattr(
        search,
        'extract_profile',
        lambda v: SimpleNamespace(minimum=minimum(v)),
    )
    monkeypatch.setattr(
        search,
        'compute_spectrum',
        lambda v, window=None: SimpleNamespace(
            ground_state_energy_absolute=minimum(v) + spacing,
        ),
    )
    return minimum


def test_onset_not_below_alignment_random_devices(
    monkeypatch: pytest.MonkeyPatch,
) -> None:
    rng = np.random.default_rng(23)
    mesh = slab_mesh(np.linspace(0, 5, 6))
    for _ in range(60):
        spacing = rng.uniform(2.0, 20.0)
        minimum = _piecewise_dot(
            monkeypatch,
            root=rng.uniform(1.6, 3.0),
            coupling=rng.uniform(100.0, 500.0),
            spacing=spacing,
            screening=rng.uniform(0.0, 0.8),
        )
        v_align = find_alignment_bias(mesh, (1.5, 3.5), tolerance=0.01)
        v_onset = find_onset_bias(mesh, (v_align, 6.0), tolerance=0.01)
        assert abs(minimum(v_align)) < 0.01
        assert v_onset >= v_align
        assert abs(minimum(v_onset) + spacing) < 0.01


@pytest.mark.integration
def test_single_alignment_crossing(coarse_mesh: Mesh) -> None:
    biases = list(np.linspace(1.5, 3.5, 21))
    minima = [
        extract_profile(field).minimum
        for field in bias_sweep(coarse_mesh, biases, SEARCH_OPTIONS)
    ]
    signs = np.sign(minima)
    assert signs[0] > 0
    assert signs[-1] < 0
    assert np.count_nonzero(np.diff(signs)) == 1
