# -*- coding: utf-8 -*-
"""Tests for the files written by a run."""
import csv
import json

import numpy as np
import pytest

from helmholtz_fd import artifacts
from helmholtz_fd.assembly import SolutionField
from helmholtz_fd.exceptions import ConfigurationError
from helmholtz_fd.verify import LatticeValues


def _read_csv(path):
    with path.open(newline='') as stream:
        return list(csv.DictReader(stream))


def test_mesh_csv(stretched_mesh, tmp_path):
    path = artifacts.write_mesh_csv(stretched_mesh, tmp_path / 'mesh.csv')
    rows = _read_csv(path)
    assert len(rows) == stretched_mesh.size
    assert tuple(rows[0]) == artifacts.MESH_COLUMNS
    assert {row['class'] for row in rows} >= {'interior', 'interface', 'dirichlet_scatterer', 'dirichlet_outer'}
    assert float(rows[5]['x']) == pytest.approx(stretched_mesh.x[5])


def test_field_csv_blanks_uncompared_nodes(regular_mesh, tmp_path):
    field = SolutionField(np.full(regular_mesh.size, 1 + 2j), regular_mesh)
    errors = np.full(regular_mesh.size, np.nan)
    errors[3] = 0.25
    rows = _read_csv(artifacts.write_field_csv(field, tmp_path / 'field.csv', errors))
    assert (rows[3]['re_v'], rows[3]['im_v'], rows[3]['abs_err']) == ('1.0', '2.0', '0.25')
    assert rows[4]['abs_err'] == ''


def test_field_archive(stretched_mesh, tmp_path):
    values = np.exp(1j * stretched_mesh.x)
    path = artifacts.write_field_npz(SolutionField(values, stretched_mesh), tmp_path / 'field.npz')
    loaded = artifacts.load_field(path)
    expected = LatticeValues.from_field(SolutionField(values, stretched_mesh))
    assert loaded.coords is expected.coords
    assert (loaded.n_theta, loaded.i_star) == (expected.n_theta, expected.i_star)
    assert loaded.scale_to(expected) == (1, 1)
    np.testing.assert_array_equal(loaded.values, values)
    np.testing.assert_array_equal(loaded.unknown, expected.unknown)


def test_load_field_errors(tmp_path):
    with pytest.raises(ConfigurationError):
        artifacts.load_field(tmp_path / 'missing.npz')
    np.savez(tmp_path / 'other.npz', values=np.zeros(3))
    with pytest.raises(ConfigurationError):
        artifacts.load_field(tmp_path / 'other.npz')


def test_convergence_csv_leaves_missing_orders_blank(tmp_path):
    rows = [
        {'h': 0.2, 'kappa_h': 1.0, 'n_nodes': 100, 'err_linf': 1e-3, 'err_l2': 1e-4, 'order_linf': None},
        {'h': 0.1, 'kappa_h': 0.5, 'n_nodes': 400, 'err_linf': 1e-5, 'err_l2': 1e-6, 'order_linf': 6.64, 'R': 0.5},
    ]
    table = _read_csv(artifacts.write_convergence_csv(rows, tmp_path / 'nested' / 'convergence.csv'))
    assert tuple(table[0]) == artifacts.CONVERGENCE_COLUMNS
    assert table[0]['order_linf'] == table[0]['order_l2'] == table[0]['R'] == ''
    assert float(table[1]['order_linf']) == 6.64
    assert not list(tmp_path.joinpath('nested').glob('.*'))


def test_table_columns_follow_first_appearance(tmp_path):
    path = artifacts.write_table_csv(tmp_path / 'table.csv', [{'b': 1, 'a': 2}, {'c': np.int64(3)}])
    rows = _read_csv(path)
    assert tuple(rows[0]) == ('b', 'a', 'c')
    assert rows[1]['c'] == '3'


def test_summary_is_plain_json(tmp_path):
    summary = {
        'residual': np.float64(1e-14),
        'alpha2': 1.5 + 2j,
        'flags': np.array([True, False]),
        'count': np.int32(4),
        'path': tmp_path,
    }
    document = json.loads(artifacts.write_summary(summary, tmp_path / 'summary.json').read_text())
    assert document == {
        'residual': 1e-14,
        'alpha2': [1.5, 2.0],
        'flags': [True, False],
        'count': 4,
        'path': str(tmp_path),
    }
