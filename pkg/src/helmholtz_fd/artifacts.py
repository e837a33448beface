# -*- coding: utf-8 -*-
"""Files written by a run: meshes, fields, stencils, tables and the run summary."""
from __future__ import annotations

import csv
import json
import os
import pathlib
import tempfile

import numpy as np

from .assembly import LinearSystem, dump_triplets
from .exceptions import ConfigurationError
from .log import get_logger
from .mesh import CoordinateSystem, Mesh, NodeClass
from .verify import LatticeValues

__all__ = (
    'MESH_COLUMNS', 'FIELD_COLUMNS', 'CONVERGENCE_COLUMNS', 'SWEEP_COLUMNS', 'write_mesh_csv', 'write_field_csv',
    'write_field_npz', 'load_field', 'write_stencils_json', 'write_triplets', 'write_table_csv',
    'write_convergence_csv', 'write_sweep_csv', 'write_summary', 'write_diagnostics'
)

LOGGER = get_logger(__name__)

MESH_COLUMNS = ('node_id', 'i', 'k', 'x', 'y', 'r', 'theta', 'class', 'local_h', 'level', 'auxiliary')
FIELD_COLUMNS = ('node_id', 'x', 'y', 're_v', 'im_v', 'abs_err')
CONVERGENCE_COLUMNS = ('h', 'kappa_h', 'n_nodes', 'err_linf', 'err_l2', 'order_linf', 'order_l2', 'R')
SWEEP_COLUMNS = ('kappa', 'kappa_d', 'n', 'kappa_h', 'r_star', 'r_max', 'err_linf', 'err_l2')


def _atomic_write(path, write, newline=None) -> pathlib.Path:
    """Write through a temporary file in the same directory and move it into place."""
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    handle, temporary = tempfile.mkstemp(dir=path.parent, prefix=f'.{path.name}.')
    try:
        with os.fdopen(handle, 'w', newline=newline) as stream:
            write(stream)
        os.replace(temporary, path)
    except BaseException:
        pathlib.Path(temporary).unlink(missing_ok=True)
        raise
    return path


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return int(value)
    return value


def write_table_csv(path, rows, columns=None) -> pathlib.Path:
    """Write dictionaries as CSV with a stable column order, the order of first appearance by default."""
    rows = list(rows)
    if columns is None:
        columns = []
        for row in rows:
            for key in row:
                if key not in columns:
                    columns.append(key)

    def write(stream):
        writer = csv.DictWriter(stream, fieldnames=list(columns), extrasaction='ignore')
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _cell(row.get(key)) for key in columns})

    return _atomic_write(path, write, newline='')


def write_mesh_csv(mesh: Mesh, path) -> pathlib.Path:
    """One row per node with lattice position, physical coordinates and class."""
    x, y, r, theta = mesh.x, mesh.y, mesh.r, mesh.theta
    spacing = mesh.local_h * mesh.unit
    rows = (
        {
            'node_id': node,
            'i': int(mesh.i[node]),
            'k': int(mesh.k[node]),
            'x': x[node],
            'y': y[node],
            'r': r[node],
            'theta': theta[node],
            'class': NodeClass(int(mesh.node_class[node])).name.lower(),
            'local_h': spacing[node],
            'level': int(mesh.level[node]),
            'auxiliary': int(bool(mesh.auxiliary[node])),
        } for node in range(mesh.size)
    )
    return write_table_csv(path, rows, MESH_COLUMNS)


def write_field_csv(field, path, errors=None) -> pathlib.Path:
    """One row per node with the complex value and, where compared, the pointwise error."""
    mesh = field.mesh
    x, y = mesh.x, mesh.y
    values = np.asarray(field.values)
    rows = (
        {
            'node_id': node,
            'x': x[node],
            'y': y[node],
            're_v': values[node].real,
            'im_v': values[node].imag,
            'abs_err': None if errors is None or not np.isfinite(errors[node]) else errors[node],
        } for node in range(mesh.size)
    )
    return write_table_csv(path, rows, FIELD_COLUMNS)


def write_field_npz(field, path) -> pathlib.Path:
    """Store values with the lattice description so that the field can serve as a reference."""
    mesh = field.mesh
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savez_compressed(
        path,
        values=np.asarray(field.values, dtype=complex),
        i=mesh.i,
        k=mesh.k,
        node_class=mesh.node_class,
        coords=np.array(mesh.coords.value),
        lattice=np.array([mesh.origin, mesh.unit]),
        shape=np.array([mesh.n_theta, mesh.i_star, mesh.i_max, mesh.n]),
        center=np.asarray(mesh.center, dtype=float),
    )
    return path


def load_field(path) -> LatticeValues:
    """Read a field archive written by :func:`write_field_npz`.

    :raises ConfigurationError: if the file is missing or not a field archive.
    """
    path = pathlib.Path(path)
    try:
        with np.load(path, allow_pickle=False) as archive:
            n_theta, i_star = (int(value) for value in archive['shape'][:2])
            origin, unit = (float(value) for value in archive['lattice'])
            node_class = archive['node_class']
            unknown = ~np.isin(node_class, [NodeClass.DIRICHLET_OUTER, NodeClass.DIRICHLET_SCATTERER])
            return LatticeValues(
                CoordinateSystem(str(archive['coords'])), origin, unit, n_theta, i_star, archive['i'],
                archive['k'], archive['values'], unknown
            )
    except (OSError, KeyError, ValueError) as exception:
        raise ConfigurationError(f'cannot read the reference field `{path}`: {exception}') from exception


def write_stencils_json(mesh: Mesh, book, boundary_stencils: dict, path) -> pathlib.Path:
    """All distinct mesh stencils and every boundary stencil."""
    stencils = []
    for (row, footprint, spacing), stencil in book.items():
        entry = stencil.as_dict((float(mesh.first_coordinate(row)), 0.0))
        entry.update({'row': row, 'footprint': footprint.value, 'spacing': spacing})
        stencils.append(entry)
    boundary = [stencil.as_dict(mesh) for _, stencil in sorted(boundary_stencils.items())]
    document = {'order': book.order, 'modes': book.mode_counts(), 'mesh': stencils, 'boundary': boundary}
    return _atomic_write(path, lambda stream: json.dump(document, stream, indent=2))


def write_triplets(system: LinearSystem, path) -> pathlib.Path:
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return dump_triplets(system, path)


def write_convergence_csv(rows, path) -> pathlib.Path:
    return write_table_csv(path, rows, CONVERGENCE_COLUMNS)


def write_sweep_csv(rows, path) -> pathlib.Path:
    return write_table_csv(path, rows, SWEEP_COLUMNS)


def _jsonable(value):
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, pathlib.Path):
        return str(value)
    return value


def write_summary(summary: dict, path) -> pathlib.Path:
    document = _jsonable(summary)
    return _atomic_write(path, lambda stream: json.dump(document, stream, indent=2, sort_keys=True))


def write_diagnostics(directory, *, mesh: Mesh, book, boundary_stencils: dict, system: LinearSystem | None,
                      summary: dict, reason: str) -> pathlib.Path:
    """Bundle of everything needed to localize a failed run: stencils, matrix, Gram data and the summary."""
    directory = pathlib.Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    LOGGER.warning(f'writing a diagnostic bundle to {directory}: {reason}')
    write_stencils_json(mesh, book, boundary_stencils, directory / 'stencils.json')
    if system is not None:
        write_triplets(system, directory / 'triplets.txt')
    write_mesh_csv(mesh, directory / 'mesh.csv')
    groups = [
        {
            'row': row,
            'footprint': footprint.value,
            'spacing': spacing,
            'mode': stencil.mode,
            'M': stencil.order,
            'J': stencil.truncation,
            'delta': stencil.delta,
            'objective': stencil.objective,
            'smallest_eigenvalue': stencil.smallest_eigenvalue,
        } for (row, footprint, spacing), stencil in book.items()
    ]
    write_table_csv(directory / 'stencil_groups.csv', groups)
    write_summary({**summary, 'diagnostic_reason': reason}, directory / 'summary.json')
    return directory
