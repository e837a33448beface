# -*- coding: utf-8 -*-
"""Tests for the ``helmholtz-fd`` command line interface."""
import csv
import json

from click.testing import CliRunner
import numpy as np
import pytest

from helmholtz_fd import __version__
from helmholtz_fd.cli import EXIT_CONFIGURATION, cli
from helmholtz_fd.config import config_from_preset
from helmholtz_fd.mesh import NodeClass
from helmholtz_fd.presets import available_presets
from helmholtz_fd.runner import build_mesh


@pytest.fixture
def invoke():
    runner = CliRunner()

    def _invoke(*args):
        return runner.invoke(cli, [str(arg) for arg in args], catch_exceptions=False)

    return _invoke


def test_version(invoke):
    result = invoke('--version')
    assert result.exit_code == 0
    assert __version__ in result.output


def test_presets(invoke):
    result = invoke('presets')
    assert result.exit_code == 0
    for name in available_presets():
        assert name in result.output
    assert '* ex2' in result.output


def test_selfcheck_single(invoke):
    result = invoke('selfcheck', '--check', 'special_functions')
    assert result.exit_code == 0
    assert 'special_functions' in result.output
    assert 'ok' in result.output


def test_selfcheck_unknown(invoke):
    assert invoke('selfcheck', '--check', 'nonsense').exit_code == EXIT_CONFIGURATION


def test_unknown_preset(invoke, tmp_path):
    result = invoke('run', '--preset', 'ex4', '--out', tmp_path)
    assert result.exit_code == EXIT_CONFIGURATION


def test_invalid_override(invoke, tmp_path):
    result = invoke('run', '--preset', 'homogeneous', '--out', tmp_path, '--set', 'mesh.n=47')
    assert result.exit_code == EXIT_CONFIGURATION


@pytest.mark.parametrize(
    'filename, content', (
        ('bad.json', '{"problem": '),
        ('bad.yaml', 'mesh: [1, 2\n'),
        ('list.yaml', '- 1\n- 2\n'),
        ('empty.yaml', ''),
    )
)
def test_unreadable_config(invoke, tmp_path, filename, content):
    path = tmp_path / filename
    path.write_text(content)
    result = invoke('run', '--config', path, '--out', tmp_path / 'out')
    assert result.exit_code == EXIT_CONFIGURATION
    assert str(path) in result.output


def test_malformed_override(invoke, tmp_path):
    result = invoke('run', '--preset', 'homogeneous', '--out', tmp_path, '--set', 'mesh.n')
    assert result.exit_code != 0


def test_run_homogeneous(invoke, tmp_path):
    result = invoke('run', '--preset', 'homogeneous', '--out', tmp_path, '--pollution', 'off', '--threads', 2)
    assert result.exit_code == 0, result.output
    assert 'relative residual' in result.output
    summary = json.loads((tmp_path / 'summary.json').read_text())
    assert summary['max_abs'] == 0.0
    assert summary['config']['method']['pollution'] is False
    assert summary['config']['method']['threads'] == 2


def test_run_from_config_file(invoke, tmp_path):
    path = tmp_path / 'experiment.yaml'
    path.write_text('preset: homogeneous\nmesh:\n  n: 64\n')
    out = tmp_path / 'out'
    result = invoke('run', '--config', path, '--out', out, '--set', 'method.pollution=false')
    assert result.exit_code == 0, result.output
    assert json.loads((out / 'summary.json').read_text())['n'] == 64


def test_dump_mesh(invoke, tmp_path):
    result = invoke('dump-mesh', '--preset', 'homogeneous', '--out', tmp_path, '-n', 64)
    assert result.exit_code == 0, result.output
    with (tmp_path / 'mesh.csv').open(newline='') as stream:
        rows = list(csv.DictReader(stream))
    assert f'{len(rows)} nodes written' in result.output


def test_dump_single_stencil(invoke, tmp_path):
    mesh = build_mesh(config_from_preset('homogeneous'))
    node = int(np.nonzero(mesh.node_class == NodeClass.INTERIOR)[0][0])
    result = invoke('dump-stencil', '--preset', 'homogeneous', '--out', tmp_path, '--node', node, '--pollution', 'off')
    assert result.exit_code == 0, result.output
    stencil = json.loads(result.output)
    assert stencil['mode'] == 'generic'


def test_dump_stencil_rejects_dirichlet_nodes(invoke, tmp_path):
    mesh = build_mesh(config_from_preset('homogeneous'))
    node = int(np.nonzero(mesh.dirichlet)[0][0])
    result = invoke('dump-stencil', '--preset', 'homogeneous', '--out', tmp_path, '--node', node)
    assert result.exit_code == EXIT_CONFIGURATION
