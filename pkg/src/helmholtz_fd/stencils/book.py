# -*- coding: utf-8 -*-
"""Stencils of all mesh nodes, computed once per distinct radius and footprint."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
import dataclasses

import numpy as np

from ..exceptions import AmbiguousStencil, NoNontrivialSolution, OrderUnreachable
from ..log import get_logger
from ..mesh import CoordinateSystem, Mesh, NodeClass
from .footprints import UNDETERMINED, Footprint, offsets
from .generic import (
    ExpansionTable, interface_jump_fold, max_order, reduce_taylor, solve_cpj, source_derivatives, source_indices
)
from .pde import PdeCoeffs
from .pollution import PollutionSettings, generic_fallback_gate, minimized_stencil

__all__ = ('Stencil', 'StencilBook', 'footprint_of')

LOGGER = get_logger(__name__)

MIN_ORDER = 2


@dataclasses.dataclass
class Stencil:
    """Coefficients of one stencil on lattice offsets (already scaled by the local spacing)."""

    offsets: np.ndarray
    coefficients: np.ndarray
    mode: str
    order: int
    local_h: float
    footprint: Footprint | None = None
    delta: float = 0.0
    truncation: int = 0
    objective: float | None = None
    smallest_eigenvalue: float | None = None
    table: ExpansionTable | None = dataclasses.field(default=None, repr=False)

    def as_dict(self, center) -> dict:
        return {
            'center': [float(c) for c in center],
            'offsets': self.offsets.tolist(),
            'coefficients': [[float(c.real), float(c.imag)] for c in np.asarray(self.coefficients, dtype=complex)],
            'mode': self.mode,
            'M': self.order,
            'local_h': self.local_h,
            'delta': self.delta,
            'J': self.truncation,
            'objective': self.objective,
            'smallest_eigenvalue': self.smallest_eigenvalue,
        }


def footprint_of(mesh: Mesh, node: int) -> Footprint:
    """Reference footprint used by ``node``."""
    node_class = NodeClass(int(mesh.node_class[node]))
    in_layer = mesh.i[node] > mesh.i_star
    if mesh.coords is CoordinateSystem.REGULAR:
        return Footprint.INTERIOR
    match node_class:
        case NodeClass.INTERIOR:
            return Footprint.INTERIOR_PML if in_layer else Footprint.INTERIOR
        case NodeClass.INTERFACE:
            return Footprint.INTERFACE
        case NodeClass.DANGLING_S:
            return Footprint.DANGLING_S
        case NodeClass.DANGLING_THETA:
            return Footprint.DANGLING_THETA
        case NodeClass.AUXILIARY:
            return Footprint.AUXILIARY_PML if in_layer else Footprint.AUXILIARY
    raise ValueError(f'node class {node_class.name} has no reference footprint')


class StencilBook:
    """Lazily computed stencils keyed by ``(row, footprint, spacing)``.

    :param order: consistency order, the highest available one when ``None``.
    :param pollution: use pollution minimized coefficients where the fallback gate allows it.
    """

    def __init__(self, mesh: Mesh, coeffs: PdeCoeffs, *, order: int | None = None, pollution: bool = True,
                 settings: PollutionSettings = PollutionSettings()):
        self.mesh = mesh
        self.coeffs = coeffs
        self.pollution = pollution
        self.settings = settings
        limit = max_order(mesh.coords, coeffs.beta)
        if order is not None and order > limit:
            raise OrderUnreachable(f'order {order} exceeds the maximum {limit} of this mesh')
        self.order = limit if order is None else order
        self._stencils: dict[tuple, Stencil] = {}

    def key(self, node: int) -> tuple:
        return int(self.mesh.i[node]), footprint_of(self.mesh, node), int(self.mesh.local_h[node])

    def nodes(self) -> np.ndarray:
        """Nodes whose equation is a mesh stencil."""
        cls = self.mesh.node_class
        excluded = [NodeClass.NEAR_BOUNDARY, NodeClass.DIRICHLET_OUTER, NodeClass.DIRICHLET_SCATTERER]
        return np.nonzero(~np.isin(cls, excluded))[0]

    def build(self, threads: int = 1) -> int:
        """Compute every distinct stencil of the mesh, returning their number."""
        pending = {self.key(node) for node in self.nodes()} - set(self._stencils)
        keys = sorted(pending, key=lambda key: (key[0], key[1].value, key[2]))
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as executor:
                for key, stencil in zip(keys, executor.map(self._compute, keys)):
                    self._stencils[key] = stencil
        else:
            for key in keys:
                self._stencils[key] = self._compute(key)
        LOGGER.info(f'{len(self._stencils)} distinct stencils: {self.mode_counts()}')
        return len(self._stencils)

    def items(self):
        """Computed ``(key, stencil)`` pairs ordered by row."""
        return sorted(self._stencils.items(), key=lambda item: (item[0][0], item[0][1].value, item[0][2]))

    def mode_counts(self) -> dict:
        counts = {}
        for stencil in self._stencils.values():
            counts[stencil.mode] = counts.get(stencil.mode, 0) + 1
        return counts

    def stencil(self, node: int) -> Stencil:
        key = self.key(node)
        if key not in self._stencils:
            self._stencils[key] = self._compute(key)
        return self._stencils[key]

    def _compute(self, key: tuple) -> Stencil:
        row, footprint, spacing = key
        mesh = self.mesh
        lattice = offsets(footprint)
        x1 = float(mesh.first_coordinate(row))
        h = spacing * mesh.unit
        h_theta = spacing * mesh.unit_theta
        theta_ratio = mesh.unit_theta / mesh.unit
        on_interface = row == mesh.i_star

        def expansion(order):
            if on_interface:
                return interface_jump_fold(self.coeffs, x1, lattice, h, order, theta_ratio=theta_ratio)
            return reduce_taylor(self.coeffs, x1, lattice, h, order, theta_ratio=theta_ratio)

        radius = np.exp(x1) if mesh.coords is CoordinateSystem.STRETCHED else 1.0
        use_generic = not self.pollution or generic_fallback_gate(
            self.coeffs.kappa, radius * h, settings=self.settings
        )
        if use_generic:
            order = self.order
            while True:
                table = expansion(order)
                try:
                    _, coefficients = solve_cpj(table, minimum_norm=footprint in UNDETERMINED)
                    break
                except AmbiguousStencil:
                    raise
                except NoNontrivialSolution:
                    if order <= MIN_ORDER:
                        raise
                    LOGGER.warning(f'{footprint.value} stencil at row {row} has no solution of order {order}')
                    order -= 1
            return Stencil(lattice * spacing, coefficients, 'generic', order, h, footprint, table=table)

        table = expansion(self.order)
        minimized = minimized_stencil(self.coeffs, x1, lattice, h, h_theta, settings=self.settings)
        return Stencil(
            lattice * spacing,
            minimized.coefficients,
            'minimized',
            self.order,
            h,
            footprint,
            delta=minimized.delta,
            truncation=minimized.truncation,
            objective=minimized.objective,
            smallest_eigenvalue=minimized.smallest_eigenvalue,
            table=table,
        )

    def neighbors(self, node: int) -> np.ndarray:
        return self.mesh.neighbors([node], self.stencil(node).offsets)[0]

    def loads(self, nodes) -> np.ndarray:
        """Right hand sides ``sum_p C_p F(p)`` of mesh stencils, zero without a source."""
        nodes = np.asarray(nodes)
        result = np.zeros(len(nodes), dtype=complex)
        if self.coeffs.source is None or not len(nodes):
            return result
        mesh = self.mesh
        order = max(self.order - 1, 0)
        jet = self.coeffs.source_jet(mesh.first[nodes], mesh.theta[nodes], order)
        derivatives = source_derivatives(jet, source_indices(order), shape=nodes.shape)
        for position, node in enumerate(nodes):
            stencil = self.stencil(node)
            table = stencil.table
            values = derivatives[position, :len(table.sources)]
            result[position] = stencil.coefficients @ table.source_functional(values)
        return result
