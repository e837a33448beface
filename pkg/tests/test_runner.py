# -*- coding: utf-8 -*-
"""End-to-end tests of single runs and studies."""
import json

import numpy as np
import pytest

from helmholtz_fd import runner
from helmholtz_fd.artifacts import load_field
from helmholtz_fd.exceptions import ConfigurationError


def test_homogeneous_run_vanishes(homogeneous_config, tmp_path):
    result = runner.run(homogeneous_config)
    assert result.field.max_abs == 0.0
    assert result.reference_kind == 'none'
    assert result.norms is None
    summary = json.loads((tmp_path / 'summary.json').read_text())
    assert summary['max_abs'] == 0.0
    assert summary['n'] == 48
    assert summary['config']['name'] == 'homogeneous'
    assert set(summary['files']) == {'field', 'field_npz'}
    assert load_field(tmp_path / 'field.npz').values.shape == (result.mesh.size,)


def test_achieved_radii_are_reported(homogeneous_config):
    mesh = runner.build_mesh(homogeneous_config)
    transform = runner.transform_for_mesh(homogeneous_config, mesh)
    assert (transform.r_star, transform.r_max) == pytest.approx((mesh.first_star, mesh.first_max))
    assert mesh.r_star == pytest.approx(2.0, rel=0.1)
    assert mesh.r_max == pytest.approx(4.0, rel=0.1)


@pytest.mark.slow
def test_smoke_run_against_series(smoke_config, tmp_path):
    result = runner.run(smoke_config.with_overrides(**{'outputs.stencils': True, 'outputs.mesh_csv': True}))
    assert result.reference_kind == 'exact'
    assert result.norms.compared > 0
    assert 0 < result.norms.linf < 0.5 * result.field.max_abs
    assert not result.field.flagged
    summary = json.loads((tmp_path / 'summary.json').read_text())
    assert summary['errors']['linf'] == pytest.approx(result.norms.linf)
    assert summary['stencils']['modes']['minimized'] > 0
    assert 'decay' in summary
    assert {'field', 'field_npz', 'stencils', 'mesh'} <= set(summary['files'])


@pytest.mark.slow
def test_refined_run_against_series(smoke_config):
    config = smoke_config.with_overrides(**{'pml.r_star': 3.0, 'mesh.refinement.mode': 'uniform'})
    coarse, fine = (runner.solve_config(config, n=n) for n in (64, 128))
    for result in (coarse, fine):
        counts = result.mesh.stats()['classes']
        assert counts['dangling_s'] + counts['dangling_theta'] > 0
        assert counts['auxiliary'] > 0
        assert result.reference_kind == 'exact'
    assert coarse.norms.linf < 0.5 * coarse.field.max_abs
    assert fine.norms.linf < coarse.norms.linf / 4


@pytest.mark.slow
def test_pollution_can_be_switched_off(smoke_config):
    result = runner.solve_config(smoke_config.with_overrides(**{'method.pollution': False}))
    assert set(result.book.mode_counts()) == {'generic'}
    assert np.isfinite(result.norms.linf)


@pytest.mark.slow
def test_convergence_study(smoke_config, tmp_path):
    rows = runner.convergence_study(smoke_config, tmp_path)
    assert [row['n'] for row in rows] == [32, 48, 64]
    assert rows[0]['order_linf'] is None
    assert all(row['order_linf'] is not None for row in rows[1:])
    assert rows[-1]['err_linf'] < rows[0]['err_linf']
    assert (tmp_path / 'convergence.csv').exists()
    assert json.loads((tmp_path / 'convergence.json').read_text())['reference'] == 'exact'


def test_convergence_study_needs_two_meshes(smoke_config):
    with pytest.raises(ConfigurationError):
        runner.convergence_study(smoke_config.with_overrides(**{'study.n_list': [48]}))


@pytest.mark.slow
def test_pml_sweep(smoke_config):
    rows = runner.pml_sweep(smoke_config)
    assert [(row['kappa'], row['kappa_d']) for row in rows] == [(5.0, 5.0), (5.0, 10.0)]
    for row in rows:
        assert row['r_max'] > row['r_star']
        assert np.isfinite(row['err_linf'])


def test_pml_sweep_needs_widths(homogeneous_config):
    with pytest.raises(ConfigurationError):
        runner.pml_sweep(homogeneous_config)


def test_diagnostic_bundle(homogeneous_config, tmp_path):
    result = runner.solve_config(homogeneous_config.with_overrides(**{'study.min_order': 4.0}))
    assert runner.diagnostic_reason(result) is None
    assert runner.diagnostic_reason(result, order=4.5) is None
    assert 'below' in runner.diagnostic_reason(result, order=2.0)

    bundle = runner.write_diagnostics(result, tmp_path / 'bundle', 'order check')
    names = {path.name for path in bundle.iterdir()}
    assert {'stencils.json', 'triplets.txt', 'mesh.csv', 'stencil_groups.csv', 'summary.json'} <= names
    assert 'smallest_eigenvalue' in (bundle / 'stencil_groups.csv').read_text().splitlines()[0]
    assert json.loads((bundle / 'summary.json').read_text())['diagnostic_reason'] == 'order check'


@pytest.mark.slow
def test_convergence_study_diagnoses_low_orders(smoke_config, tmp_path):
    config = smoke_config.with_overrides(**{'study.n_list': [32, 48], 'study.min_order': 50.0})
    runner.convergence_study(config, tmp_path)
    bundle = tmp_path / 'diagnostics' / 'n48'
    assert not (tmp_path / 'diagnostics' / 'n32').exists()
    assert 'below' in json.loads((bundle / 'summary.json').read_text())['diagnostic_reason']
    assert json.loads((tmp_path / 'convergence.json').read_text())['diagnostics'] == {'48': str(bundle)}


@pytest.mark.slow
def test_pml_sweep_diagnoses_large_errors(smoke_config, tmp_path):
    config = smoke_config.with_overrides(**{'outputs.error_threshold': 1e-300, 'study.kappa_d_list': [3.0]})
    runner.pml_sweep(config, tmp_path)
    bundle = tmp_path / 'diagnostics' / 'kappa5_kd3'
    assert (bundle / 'stencil_groups.csv').exists()
    assert 'threshold' in json.loads((bundle / 'summary.json').read_text())['diagnostic_reason']
    assert json.loads((tmp_path / 'pml_sweep.json').read_text())['diagnostics'] == {'5, 3': str(bundle)}


def test_sweep_cell_config(smoke_config):
    cell = runner.sweep_cell_config(smoke_config, 10.0, 30.0)
    assert cell.problem.kappa == 10.0
    assert cell.pml.target_r_max(10.0) == pytest.approx(5.0)
