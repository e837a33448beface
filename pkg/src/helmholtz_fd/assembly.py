# -*- coding: utf-8 -*-
"""Global sparse system of the discrete problem and its direct solution."""
from __future__ import annotations

import dataclasses
import pathlib
import time
import warnings

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as splinalg

from .exceptions import MissingStencil, ResidualTooLarge, SingularMatrix, TopologyError
from .log import get_logger
from .mesh import Mesh, NodeClass

__all__ = ('LinearSystem', 'SolutionField', 'assemble', 'dirichlet_values', 'solve', 'dump_triplets')

LOGGER = get_logger(__name__)

RESIDUAL_TOLERANCE = 1e-10


@dataclasses.dataclass
class LinearSystem:
    """Sparse system ``matrix v = rhs`` with one row per unknown node.

    :param unknowns: node id of every row.
    :param fixed: values of all nodes of the mesh, used for the Dirichlet nodes.
    """

    matrix: sparse.csc_matrix
    rhs: np.ndarray
    unknowns: np.ndarray
    fixed: np.ndarray
    mesh: Mesh | None = None

    @property
    def size(self) -> int:
        return len(self.unknowns)

    @property
    def row_of(self) -> np.ndarray:
        """Row of every node, ``-1`` for Dirichlet nodes."""
        rows = np.full(len(self.fixed), -1, dtype=np.int64)
        rows[self.unknowns] = np.arange(len(self.unknowns))
        return rows


@dataclasses.dataclass
class SolutionField:
    """Complex nodal values ``v_h`` on every node of a mesh, Dirichlet nodes included."""

    values: np.ndarray
    mesh: Mesh | None = None
    residual: float = 0.0
    flagged: bool = False
    timings: dict = dataclasses.field(default_factory=dict)

    def __len__(self):
        return len(self.values)

    @property
    def max_abs(self) -> float:
        return float(np.abs(self.values).max(initial=0.0))

    def norms(self, mask=None) -> tuple[float, float]:
        """``(l_inf, l_2)`` of the values, the discrete ``l_2`` norm being the root mean square."""
        values = self.values if mask is None else self.values[mask]
        if not len(values):
            return 0.0, 0.0
        magnitude = np.abs(values)
        return float(magnitude.max()), float(np.sqrt(np.mean(magnitude**2)))

    def regular_region(self) -> np.ndarray:
        """Mask of the nodes inside the computational domain, the interface included."""
        return self.mesh.i <= self.mesh.i_star


def dirichlet_values(mesh: Mesh, boundary_data) -> np.ndarray:
    """Values of all nodes fixed by a Dirichlet condition: ``g`` on the scatterer and zero at ``r_max``."""
    values = np.zeros(mesh.size, dtype=complex)
    scatterer = np.nonzero(mesh.node_class == NodeClass.DIRICHLET_SCATTERER)[0]
    if len(scatterer):
        values[scatterer] = boundary_data.value(mesh.x[scatterer], mesh.y[scatterer])
    return values


def _group_nodes(mesh: Mesh, nodes: np.ndarray):
    """Split ``nodes`` into groups sharing one stencil."""
    layer = (mesh.i[nodes] > mesh.i_star).astype(np.int64)
    keys = np.column_stack([mesh.i[nodes], mesh.node_class[nodes], mesh.local_h[nodes], layer])
    _, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    order = np.argsort(inverse, kind='stable')
    splits = np.nonzero(np.diff(inverse[order]))[0] + 1
    return np.split(nodes[order], splits)


def assemble(mesh: Mesh, book, problem, boundary_stencils: dict | None = None) -> LinearSystem:
    """Assemble the rows of all unknown nodes.

    :param book: :class:`~helmholtz_fd.stencils.book.StencilBook` of the mesh stencils.
    :param problem: :class:`~helmholtz_fd.problems.Problem` providing the boundary data.
    :param boundary_stencils: boundary stencils of the ``NEAR_BOUNDARY`` nodes.
    :raises MissingStencil: if an unknown node has no stencil.
    :raises TopologyError: if a stencil refers to a node outside the mesh.
    """
    start = time.perf_counter()
    boundary_stencils = boundary_stencils or {}
    fixed = dirichlet_values(mesh, problem.boundary_data)
    unknowns = np.nonzero(~mesh.dirichlet)[0]
    rows_of = np.full(mesh.size, -1, dtype=np.int64)
    rows_of[unknowns] = np.arange(len(unknowns))
    rhs = np.zeros(len(unknowns), dtype=complex)
    rows, cols, data = [], [], []

    def add(centers, neighbors, coefficients):
        if np.any(neighbors < 0):
            node = int(np.asarray(centers)[np.nonzero(np.any(neighbors < 0, axis=1))[0][0]])
            raise TopologyError(f'stencil of node {node} at lattice ({mesh.i[node]}, {mesh.k[node]}) leaves the mesh')
        row = rows_of[centers]
        coefficients = np.broadcast_to(coefficients, neighbors.shape)
        col = rows_of[neighbors]
        known = col < 0
        np.add.at(rhs, row, -np.sum(np.where(known, coefficients * fixed[neighbors], 0.0), axis=1))
        free = ~known
        rows.append(np.broadcast_to(row[:, None], neighbors.shape)[free])
        cols.append(col[free])
        data.append(coefficients[free])

    mesh_nodes = book.nodes()
    for group in _group_nodes(mesh, mesh_nodes) if len(mesh_nodes) else []:
        stencil = book.stencil(int(group[0]))
        add(group, mesh.neighbors(group, stencil.offsets), stencil.coefficients[None, :])
    rhs[rows_of[mesh_nodes]] += book.loads(mesh_nodes)

    near = np.nonzero(mesh.node_class == NodeClass.NEAR_BOUNDARY)[0]
    for node in near:
        try:
            stencil = boundary_stencils[int(node)]
        except KeyError:
            raise MissingStencil(
                f'boundary node {node} at ({mesh.x[node]:.4f}, {mesh.y[node]:.4f}) has no stencil'
            ) from None
        add(np.array([node]), stencil.nodes[None, :], stencil.coefficients[None, :])
        rhs[rows_of[node]] += stencil.load(problem.boundary_data)

    covered = np.zeros(mesh.size, dtype=bool)
    covered[mesh_nodes] = True
    covered[near] = True
    if not np.all(covered[unknowns]):
        node = int(unknowns[~covered[unknowns]][0])
        raise MissingStencil(f'node {node} of class {NodeClass(int(mesh.node_class[node])).name} has no stencil')

    matrix = sparse.coo_matrix(
        (np.concatenate(data) if data else np.zeros(0, dtype=complex),
         (np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64),
          np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64))),
        shape=(len(unknowns), len(unknowns)),
    ).tocsc()
    if not np.all(np.isfinite(matrix.data)):
        raise SingularMatrix('the assembled matrix has non-finite entries')
    LOGGER.info(
        f'assembled {len(unknowns)} unknowns with {matrix.nnz} nonzeros in {time.perf_counter() - start:.2f} s'
    )
    return LinearSystem(matrix, rhs, unknowns, fixed, mesh)


def solve(system: LinearSystem) -> SolutionField:
    """Solve with a sparse LU factorization.

    :raises SingularMatrix: if the factorization fails.
    """
    start = time.perf_counter()
    values = np.array(system.fixed, dtype=complex)
    if system.size:
        try:
            factor = splinalg.splu(sparse.csc_matrix(system.matrix, dtype=complex))
        except RuntimeError as exception:
            raise SingularMatrix(f'sparse LU factorization failed: {exception}') from exception
        factorized = time.perf_counter()
        solution = factor.solve(np.asarray(system.rhs, dtype=complex))
        if not np.all(np.isfinite(solution)):
            raise SingularMatrix('the solution of the sparse system is not finite')
        values[system.unknowns] = solution
        misfit = np.abs(system.matrix @ solution - system.rhs).max()
        scale = np.abs(system.rhs).max()
        residual = float(misfit / scale) if scale > 0 else float(misfit)
    else:
        factorized = start
        residual = 0.0

    flagged = residual > RESIDUAL_TOLERANCE
    if flagged:
        warnings.warn(
            f'relative residual {residual:.2e} exceeds {RESIDUAL_TOLERANCE:.0e}', ResidualTooLarge, stacklevel=2
        )
    timings = {'factorize': factorized - start, 'solve': time.perf_counter() - factorized}
    LOGGER.info(
        f'solved {system.size} unknowns, relative residual {residual:.2e}, '
        f'factorization {timings["factorize"]:.2f} s'
    )
    return SolutionField(values, system.mesh, residual, flagged, timings)


def dump_triplets(system: LinearSystem, path) -> pathlib.Path:
    """Write the matrix as ``row col re im`` lines (zero based) followed by the right hand side as ``row -1 re im``."""
    path = pathlib.Path(path)
    matrix = system.matrix.tocoo()
    entries = np.column_stack([matrix.row, matrix.col, matrix.data.real, matrix.data.imag])
    rhs = np.column_stack([np.arange(system.size), np.full(system.size, -1), system.rhs.real, system.rhs.imag])
    np.savetxt(
        path,
        np.vstack([entries, rhs]),
        fmt=['%d', '%d', '%.17e', '%.17e'],
        header=f'helmholtz_fd triplets: {system.size} unknowns, {matrix.nnz} nonzeros\nrow col re im',
    )
    return path
