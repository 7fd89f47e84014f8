from __future__ import annotations

import os
import pathlib
from unittest import mock

import pytest
from click.testing import CliRunner

import nanomis
from nanomis.cli import cli
from nanomis.config import CONFIG_ENV_VAR


def test_no_command() -> None:
    runner = CliRunner()
    result = runner.invoke(cli)
    assert 'Usage:' in result.output


def test_help_command() -> None:
    runner = CliRunner()
    result = runner.invoke(cli, ['help'])
    assert result.exit_code == 0
    assert result.output.startswith('Usage:')
    for command in ('solve', 'sweep', 'characterize', 'cycle', 'zeeman'):
        assert command in result.output


def test_version_command() -> None:
    runner = CliRunner()
    result = runner.invoke(cli, ['version'])
    assert result.exit_code == 0
    assert result.output.strip() == f'nanomis v{nanomis.__version__}'


def test_solve_requires_bias(run_config: str) -> None:
    runner = CliRunner()
    result = runner.invoke(cli, ['solve', run_config])
    assert result.exit_code == 2


def test_solve(run_config: str) -> None:
    runner = CliRunner()
    result = runner.invoke(cli, ['solve', run_config, '--vgate-V', '1.5'])
    assert result.exit_code == 0
    results = os.path.join(os.path.dirname(run_config), 'results')
    assert os.path.isfile(os.path.join(results, 'solve_1.5000V.json'))


def test_bad_config_exit_code(tmp_path: pathlib.Path) -> None:
    path = tmp_path / 'run.json'
    path.write_text('{"unknown": 1}')
    runner = CliRunner()
    result = runner.invoke(cli, ['zeeman', str(path), '--b-tesla', '1.0'])
    assert result.exit_code == 3


def test_config_from_env_var(run_config: str) -> None:
    runner = CliRunner()
    result = runner.invoke(
        cli,
        ['zeeman', '--b-tesla', '2.0'],
        env={CONFIG_ENV_VAR: run_config},
    )
    assert result.exit_code == 0
    results = os.path.join(os.path.dirname(run_config), 'results')
    assert os.path.isfile(os.path.join(results, 'zeeman_2.0000T.json'))


@pytest.mark.parametrize(
    ('args', 'target', 'expected_args', 'expected_kwargs'),
    (
        (
            ['sweep', '--from-V', '2.0', '--to-V', '3.0', '--steps', '5'],
            'sweep_command',
            (None, 2.0, 3.0, 5),
            {'output_dir': None, 'workers': 1},
        ),
        (
            ['characterize', '--output-dir', 'out'],
            'characterize_command',
            (None,),
            {'output_dir': 'out'},
        ),
        (
            [
                'cycle',
                '--pulses',
                '100',
                '--seed',
                '3',
                '--trajectories',
                '2',
                '--workers',
                '2',
                '--pi-pulse',
                '--events',
            ],
            'cycle_command',
            (None, 100),
            {
                'seed': 3,
                'trajectories': 2,
                'workers': 2,
                'pi_pulse': True,
                'events': True,
                'output_dir': None,
            },
        ),
    ),
)
def test_commands_forward_options(
    monkeypatch: pytest.MonkeyPatch,
    args: list[str],
    target: str,
    expected_args: tuple[object, ...],
    expected_kwargs: dict[str, object],
) -> None:
    monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)
    with mock.patch(f'nanomis.cli.{target}', return_value=5) as command:
        runner = CliRunner()
        result = runner.invoke(cli, ['--log-level', 'DEBUG', *args])
    assert result.exit_code == 5
    command.assert_called_once_with(*expected_args, **expected_kwargs)
