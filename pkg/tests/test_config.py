# -*- coding: utf-8 -*-
"""Tests for the experiment configuration and the presets."""
import json

from pydantic import ValidationError
import pytest

from helmholtz_fd.config import ExperimentConfig, MeshConfig, config_from_preset, dump_config, load_config
from helmholtz_fd.exceptions import ConfigurationError
from helmholtz_fd.mesh import CoordinateSystem
from helmholtz_fd.presets import available_presets, default_preset, preset_inputs


@pytest.mark.parametrize('name', sorted(available_presets()))
def test_presets_validate(name):
    config = config_from_preset(name)
    assert config.name == name
    assert config.description == available_presets()[name]['description']


def test_default_preset():
    assert default_preset() == 'ex2'
    assert config_from_preset().name == 'ex2'


def test_unknown_preset():
    with pytest.raises(ConfigurationError):
        preset_inputs('ex4')


def test_preset_resolution():
    config = config_from_preset('ex2')
    assert config.mesh.n is None
    assert config.mesh.resolve_n(config.problem.kappa, config.pml.r_star) == 752
    assert config.pml.target_r_max(config.problem.kappa) == pytest.approx(4.0)
    assert config.mesh.coordinate_system is CoordinateSystem.STRETCHED
    assert config.pml.transform_kind(CoordinateSystem.STRETCHED) == 'linear_s'


def test_resolve_n_rounds_to_multiples_of_eight():
    assert MeshConfig(kappa_h=1.0).resolve_n(20.0, 3.0) == 376
    assert MeshConfig(kappa_h=100.0).resolve_n(1.0, 1.0) == 8
    assert MeshConfig(n=50, kappa_h=1.0).resolve_n(20.0, 3.0) == 50


@pytest.mark.parametrize(
    'overrides', (
        {'pml': {'r_star': 2.0, 'kappa_d': None, 'r_max': None}},
        {
            'mesh': {'coords': 'regular', 'refinement': {'mode': 'none'}},
            'problem': {'scatterer': {'kind': 'polar_curve'}},
        },
        {'mesh': {'coords': 'regular'}},
        {'mesh': {'n': 49}},
        {'problem': {'source': {'name': 'plane_wave_bump', 'params': {'radius': 4.0}}}},
        {'problem': {'source': {'name': 'point_source'}}},
        {'reference': {'kind': 'grid'}},
        {'reference': {'kind': 'file'}},
        {'study': {'n_list': [48, 32]}},
        {'study': {'n_list': [32, 48], 'reference_n': 128}},
        {'pml': {'kind': 'quadratic'}},
        {'method': {'unknown_setting': 1}},
    ),
    ids=(
        'no-outer-radius', 'regular-flower', 'regular-refined', 'odd-n', 'source-beyond-layer', 'unknown-source',
        'grid-without-n', 'file-without-path', 'decreasing-n', 'indivisible-reference', 'regular-transform',
        'extra-field'
    )
)
def test_invalid_configurations(overrides):
    with pytest.raises(ValidationError):
        ExperimentConfig.model_validate(preset_inputs('smoke', overrides))


def test_with_overrides():
    config = config_from_preset('smoke')
    updated = config.with_overrides(**{'mesh.n': 64, 'method.pollution': False})
    assert (updated.mesh.n, updated.method.pollution) == (64, False)
    assert config.mesh.n == 48
    with pytest.raises(ValidationError):
        config.with_overrides(**{'mesh.n': 63})


def test_method_settings():
    settings = config_from_preset('smoke', {'method': {'j_margin': 40, 'delta_floor': 1e-12}}).method.settings()
    assert settings.j_margin == 40
    assert settings.delta_floor == 1e-12


def test_load_config_with_preset(tmp_path):
    path = tmp_path / 'experiment.yaml'
    path.write_text('preset: smoke\nmesh:\n  n: 32\n')
    config = load_config(path, {'problem': {'kappa': 4.0}})
    assert config.name == 'smoke'
    assert config.mesh.n == 32
    assert config.problem.kappa == 4.0
    assert config.problem.boundary_data.name == 'modal_series'


def test_load_config_json(tmp_path):
    config = config_from_preset('homogeneous')
    path = tmp_path / 'experiment.json'
    path.write_text(json.dumps(dump_config(config)))
    assert load_config(path) == config


def test_load_config_missing(tmp_path):
    with pytest.raises(ConfigurationError):
        load_config(tmp_path / 'missing.yaml')
