# -*- coding: utf-8 -*-
"""Tests for the workflow protocol files."""
from importlib_resources import files
import pytest

from helmholtz_fd.config import ExperimentConfig
from helmholtz_fd.presets import preset_inputs
from helmholtz_fd.workflows.protocols.utils import load_yaml, merged_entry, recursive_merge

PROTOCOLS = {
    'base.yaml': ('helmholtz',),
    'convergence.yaml': ('solve', 'helmholtz'),
    'pml_sweep.yaml': ('solve', 'helmholtz'),
}


def _load(filename):
    return load_yaml(files('helmholtz_fd.workflows.protocols') / 'helmholtz' / filename)


def _parameters(inputs, path):
    for key in path:
        inputs = inputs[key]
    return inputs['parameters']


@pytest.mark.parametrize('filename', sorted(PROTOCOLS))
def test_protocol_names(filename):
    data = _load(filename)
    assert data['default_protocol'] == 'moderate'
    assert set(data['protocols']) == {'moderate', 'precise', 'fast'}
    assert all(values['description'] for values in data['protocols'].values())


@pytest.mark.parametrize('filename', sorted(PROTOCOLS))
@pytest.mark.parametrize('protocol', ('moderate', 'precise', 'fast'))
def test_protocol_parameters_validate(filename, protocol):
    inputs = merged_entry(_load(filename), 'protocols', 'default_protocol', protocol)
    assert 'description' not in inputs
    parameters = _parameters(inputs, PROTOCOLS[filename])
    ExperimentConfig.model_validate(recursive_merge(preset_inputs('smoke'), parameters))


def test_fast_protocol_uses_generic_stencils():
    inputs = merged_entry(_load('base.yaml'), 'protocols', 'default_protocol', 'fast')
    method = _parameters(inputs, PROTOCOLS['base.yaml'])['method']
    assert method == {'pollution': False, 'threads': 1}


def test_overrides_win():
    inputs = merged_entry(_load('base.yaml'), 'protocols', 'default_protocol', 'precise', {'max_iterations': 1})
    assert inputs['max_iterations'] == 1
    assert _parameters(inputs, PROTOCOLS['base.yaml'])['method']['j_margin'] == 40


def test_unknown_protocol():
    with pytest.raises(ValueError):
        merged_entry(_load('base.yaml'), 'protocols', 'default_protocol', 'sloppy')


def test_recursive_merge_keeps_nested_keys():
    merged = recursive_merge({'a': {'b': 1, 'c': 2}, 'd': 3}, {'a': {'b': 4}})
    assert merged == {'a': {'b': 4, 'c': 2}, 'd': 3}
