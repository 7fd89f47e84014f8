from __future__ import annotations

import csv
import json
import logging
import os
import pathlib
from typing import Any
from unittest import mock

import pytest

from nanomis.commands import characterize_command
from nanomis.commands import cycle_command
from nanomis.commands import ExitCode
from nanomis.commands import solve_command
from nanomis.commands import sweep_command
from nanomis.commands import SWEEP_COLUMNS
from nanomis.commands import zeeman_command
from nanomis.electrostatics.exceptions import NotConvergedError
from nanomis.qdot.exceptions import BracketError
from nanomis.qdot.exceptions import FitError
from nanomis.qdot.report import DotReport
from testing.configs import write_run_config
from testing.spectra import synthetic_spectrum


def _results(run_config: str) -> str:
    return os.path.join(os.path.dirname(run_config), 'results')


def _load(path: str) -> dict[str, Any]:
    with open(path) as f:
        return json.load(f)


def test_solve_command(run_config: str) -> None:
    assert solve_command(run_config, 2.0) == ExitCode.SUCCESS

    results = _results(run_config)
    summary = _load(os.path.join(results, 'solve_2.0000V.json'))
    assert summary['schema_version'] == '1'
    assert summary['converged'] is True
    assert summary['vgate_V'] == 2.0
    assert summary['electrode_charges_e']['gate'] > 0
    densities = summary['sheet_density_cm2']
    assert densities['holes_edge'] == pytest.approx(1e11, rel=0.05)
    assert densities['holes_axis'] < densities['holes_edge']
    assert densities['electrons_max'] >= densities['electrons_axis'] >= 0
    assert os.path.isfile(os.path.join(results, 'band_profile_2.0000V.csv'))


def test_solve_output_dir_override(
    run_config: str,
    tmp_path: pathlib.Path,
) -> None:
    other = str(tmp_path / 'elsewhere')
    assert solve_command(run_config, 1.0, output_dir=other) == 0
    assert os.path.isfile(os.path.join(other, 'solve_1.0000V.json'))


def test_solve_not_converged(tmp_path: pathlib.Path) -> None:
    path = write_run_config(
        tmp_path / 'run.json',
        solver={'max_iterations': 1},
    )
    assert solve_command(path, 2.5) == ExitCode.CONVERGENCE_ERROR


def test_missing_config(
    tmp_path: pathlib.Path,
    caplog: pytest.LogCaptureFixture,
) -> None:
    caplog.set_level(logging.ERROR)
    path = str(tmp_path / 'missing.json')
    assert solve_command(path, 1.0) == ExitCode.CONFIG_ERROR
    assert any('Invalid configuration' in r.message for r in caplog.records)


def test_mistyped_config_value(
    tmp_path: pathlib.Path,
    caplog: pytest.LogCaptureFixture,
) -> None:
    caplog.set_level(logging.ERROR)
    path = write_run_config(
        tmp_path / 'run.json',
        solver={'tolerance': 'tight'},
    )
    assert solve_command(path, 1.0) == ExitCode.CONFIG_ERROR
    assert any('Invalid configuration' in r.message for r in caplog.records)


def test_mesh_too_large(tmp_path: pathlib.Path) -> None:
    path = write_run_config(tmp_path / 'run.json', mesh={'max_nodes': 100})
    assert solve_command(path, 1.0) == ExitCode.CONFIG_ERROR


def test_sweep_command(run_config: str) -> None:
    assert sweep_command(run_config, 2.0, 2.4, 3) == ExitCode.SUCCESS

    with open(os.path.join(_results(run_config), 'sweep.csv')) as f:
        rows = list(csv.reader(f))
    assert tuple(rows[0]) == SWEEP_COLUMNS
    assert len(rows) == 4
    assert [float(row[0]) for row in rows[1:]] == [2.0, 2.2, 2.4]
    assert all(row[-1] in ('ok', 'fit_failed') for row in rows[1:])
    min_ec = [float(row[1]) for row in rows[1:]]
    assert min_ec == sorted(min_ec, reverse=True)


def test_sweep_reversed_range(run_config: str) -> None:
    assert sweep_command(run_config, 3.0, 2.0, 5) == ExitCode.CONFIG_ERROR


def test_sweep_reports_fit_failures(run_config: str) -> None:
    with mock.patch(
        'nanomis.commands.compute_spectrum',
        side_effect=FitError('flat'),
    ):
        assert sweep_command(run_config, 1.0, 1.0, 1) == ExitCode.SUCCESS
    with open(os.path.join(_results(run_config), 'sweep.csv')) as f:
        rows = list(csv.reader(f))
    assert rows[1][-1] == 'fit_failed'
    assert rows[1][2] == 'nan'


@pytest.mark.parametrize(
    ('failures', 'expected'),
    (
        ({}, ExitCode.SUCCESS),
        ({'v_align': BracketError}, ExitCode.BRACKET_ERROR),
        (
            {'v_onset': BracketError, 'spectrum': NotConvergedError},
            ExitCode.CONVERGENCE_ERROR,
        ),
        ({'spectrum': FitError}, ExitCode.CONVERGENCE_ERROR),
    ),
)
def test_characterize_exit_codes(
    run_config: str,
    failures: dict[str, type[Exception]],
    expected: ExitCode,
) -> None:
    report = DotReport(
        v_align=2.0,
        spectrum=synthetic_spectrum(2.0, 12.5),
        failures=failures,
        errors={name: 'failed' for name in failures},
    )
    with mock.patch('nanomis.commands.characterize', return_value=report):
        assert characterize_command(run_config) == expected

    data = _load(os.path.join(_results(run_config), 'dot_report.json'))
    assert data['v_align_V'] == 2.0
    assert data['hbar_omega0_meV'] == 12.5
    assert set(data['errors']) == set(failures)
    assert 'generated_at' in data


def test_cycle_command(run_config: str) -> None:
    assert cycle_command(run_config, 500, events=True) == ExitCode.SUCCESS

    results = _results(run_config)
    data = _load(os.path.join(results, 'cycle_stats.json'))
    assert data['pulses'] == 500
    assert data['rng_seed'] == 20050101
    assert data['repetition_rate_MHz'] == pytest.approx(49.75, abs=0.01)
    assert data['p_multi'] == 0.0
    assert data['p0'] + data['p1'] == pytest.approx(1.0)
    assert data['mean_emission_time_ns'] == pytest.approx(11.1, abs=0.3)
    assert data['protocol']['tau_nonrad'] is None
    assert data['conversion_ratio'] == 1.0
    assert data['analytic_efficiency'] == pytest.approx(0.99991, abs=1e-5)
    with open(os.path.join(results, 'cycle_events.csv')) as f:
        assert len(f.readlines()) == 501


def _cycle_stats(path: str) -> dict[str, Any]:
    data = _load(path)
    data.pop('generated_at')
    return data


def test_cycle_command_seed_reproducible(run_config: str) -> None:
    path = os.path.join(_results(run_config), 'cycle_stats.json')
    protocol = {'t1': 1.0, 't3': 1.0}
    config = write_run_config(
        pathlib.Path(run_config),
        protocol=protocol,
    )
    assert cycle_command(config, 300, seed=4) == 0
    first = _cycle_stats(path)
    assert cycle_command(config, 300, seed=4, trajectories=3, workers=3) == 0
    split = _cycle_stats(path)
    assert cycle_command(config, 300, seed=4) == 0
    assert _cycle_stats(path) == first
    assert split['trajectories'] == 3


def test_cycle_command_invalid(run_config: str) -> None:
    assert cycle_command(run_config, 2, trajectories=5) == (
        ExitCode.CONFIG_ERROR
    )


def test_zeeman_command(run_config: str) -> None:
    assert zeeman_command(run_config, 5.0) == ExitCode.SUCCESS

    data = _load(os.path.join(_results(run_config), 'zeeman_5.0000T.json'))
    assert data['b_tesla'] == 5.0
    assert data['electron_splitting_meV'] == pytest.approx(0.868, abs=1e-3)
    assert data['configured']['polarization'] == 'sigma_minus'
    assert data['transition_energy_eV'] == pytest.approx(0.7625)
    assert len(data['transitions']) == 4
    for transition in data['transitions']:
        assert {'e_sz', 'h_sz', 'polarization', 'shift_meV'} <= set(
            transition,
        )
    assert data['warnings']


def test_zeeman_command_pi_pulse(run_config: str) -> None:
    assert zeeman_command(run_config, 1.0, pi_pulse=True) == 0
    data = _load(os.path.join(_results(run_config), 'zeeman_1.0000T.json'))
    assert data['pi_pulse'] is True
    assert data['configured']['polarization'] == 'sigma_plus'
    assert data['configured']['e_sz'] == -0.5


def test_zeeman_command_negative_field(run_config: str) -> None:
    assert zeeman_command(run_config, -1.0) == ExitCode.CONFIG_ERROR
