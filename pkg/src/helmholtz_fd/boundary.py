# -*- coding: utf-8 -*-
"""Boundary stencils for nodes next to a scatterer that is not aligned with the mesh.

A boundary stencil consists of 7 or 8 mesh nodes around the center, biased
towards the exterior normal, and 5 points on the scatterer boundary. Its
coefficients minimize the pollution functional built from the local
Fourier-Bessel expansion of plane waves around the center; the boundary values
are known and move to the right hand side.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
import dataclasses

import numpy as np

from .exceptions import ConfigurationError, InsufficientStencil
from .geometry import ClosestPoint, ScattererGeometry
from .log import get_logger
from .mesh import CoordinateSystem, Mesh, NodeClass
from .specfun import bessel_j
from .stencils.pollution import PollutionSettings, minimize_with_policy, truncated_test_functions

__all__ = (
    'BoundaryStencil', 'detect_boundary_nodes', 'boundary_points', 'boundary_stencil_coeffs',
    'build_boundary_stencils', 'check_source_clearance'
)

LOGGER = get_logger(__name__)

MIN_POINTS = 12
SEED_POINTS = 8
MIN_SEED_POINTS = 7
BOUNDARY_POINTS = 5
SLAVE_DISTANCE = 0.05
SOURCE_CLEARANCE = 3.0


@dataclasses.dataclass
class BoundaryStencil:
    """Stencil of a node next to the scatterer.

    ``nodes`` are mesh node ids (center first) with ``coefficients``; the
    ``boundary`` points carry ``boundary_coefficients``. A slaved node has a
    two-point stencil interpolating along the normal.
    """

    node: int
    base: ClosestPoint
    nodes: np.ndarray
    coefficients: np.ndarray
    boundary: np.ndarray
    boundary_coefficients: np.ndarray
    local_h: float
    delta: float = 0.0
    truncation: int = 0
    objective: float | None = None
    smallest_eigenvalue: float | None = None
    slaved: bool = False

    def load(self, boundary_data) -> complex:
        """Contribution of the boundary points, moved to the right hand side."""
        if not len(self.boundary):
            return 0j
        values = boundary_data.value(self.boundary[:, 0], self.boundary[:, 1])
        return complex(-self.boundary_coefficients @ values)

    def as_dict(self, mesh: Mesh) -> dict:
        return {
            'center': [float(mesh.x[self.node]), float(mesh.y[self.node])],
            'nodes': self.nodes.tolist(),
            'coefficients': [[float(c.real), float(c.imag)] for c in self.coefficients],
            'boundary': self.boundary.tolist(),
            'boundary_coefficients': [[float(c.real), float(c.imag)] for c in self.boundary_coefficients],
            'mode': 'slaved' if self.slaved else 'boundary',
            'local_h': self.local_h,
            'delta': self.delta,
            'J': self.truncation,
            'objective': self.objective,
            'smallest_eigenvalue': self.smallest_eigenvalue,
        }


def _physical_h(mesh: Mesh, node: int) -> float:
    h = mesh.local_h[node] * mesh.unit
    if mesh.coords is CoordinateSystem.STRETCHED:
        h *= mesh.r[node]
    return float(h)


def detect_boundary_nodes(mesh: Mesh, geometry: ScattererGeometry | None = None) -> dict[int, ClosestPoint]:
    """Base points on the scatterer boundary of all ``NEAR_BOUNDARY`` nodes."""
    geometry = geometry or mesh.geometry
    nodes = np.nonzero(mesh.node_class == NodeClass.NEAR_BOUNDARY)[0]
    if not len(nodes):
        return {}
    x, y = mesh.x, mesh.y
    return {int(node): geometry.closest_point(float(x[node]), float(y[node])) for node in nodes}


def boundary_points(geometry: ScattererGeometry, base: ClosestPoint, h: float) -> np.ndarray:
    """Five boundary points around ``base`` spaced by the arc length ``h``, as an ``(5, 2)`` array."""
    x, y = geometry.boundary_points(base, h, BOUNDARY_POINTS)
    return np.column_stack([x, y])


def _seed_nodes(mesh: Mesh, node: int, base: ClosestPoint) -> np.ndarray:
    """Up to eight usable mesh nodes, the compact neighborhood first, then towards the exterior normal."""
    spacing = int(mesh.local_h[node])
    usable = lambda ids: ids[(ids >= 0) & ~np.isin(mesh.node_class[np.maximum(ids, 0)], [
        NodeClass.DIRICHLET_OUTER, NodeClass.DIRICHLET_SCATTERER
    ])]
    compact = np.array([(di, dk) for di in (-1, 0, 1) for dk in (-1, 0, 1) if (di, dk) != (0, 0)]) * spacing
    chosen = [node] + [int(n) for n in usable(mesh.neighbors([node], compact)[0])]

    normal = np.array([mesh.x[node] - base.x, mesh.y[node] - base.y])
    normal /= max(np.linalg.norm(normal), 1e-300)
    ring = np.array([(di, dk) for di in range(-2, 3) for dk in range(-2, 3) if max(abs(di), abs(dk)) == 2]) * spacing
    candidates = usable(mesh.neighbors([node], ring)[0])
    if len(candidates):
        direction = np.column_stack([mesh.x[candidates] - mesh.x[node], mesh.y[candidates] - mesh.y[node]])
        distance = np.linalg.norm(direction, axis=1)
        alignment = direction @ normal / distance
        order = np.lexsort((distance, -alignment))
        for candidate in candidates[order]:
            if len(chosen) >= SEED_POINTS:
                break
            chosen.append(int(candidate))
    return np.array(chosen[:max(SEED_POINTS, 1)], dtype=np.int64)


def boundary_stencil_coeffs(center, grid_points: np.ndarray, boundary: np.ndarray, kappa: float, *,
                            settings: PollutionSettings = PollutionSettings()):
    """Minimize the pollution functional over a boundary stencil.

    :param center: Cartesian center of the stencil, also the first grid point.
    :param grid_points: ``(n, 2)`` Cartesian mesh points, center first.
    :param boundary: ``(5, 2)`` Cartesian boundary points.
    :return: the minimized stencil with coefficients ordered as ``grid_points`` then ``boundary``.
    :raises InsufficientStencil: with fewer than twelve points.
    """
    points = np.vstack([grid_points, boundary])
    if len(points) < MIN_POINTS:
        raise InsufficientStencil(f'boundary stencil with {len(points)} < {MIN_POINTS} points')
    offset = points - np.asarray(center)[None, :]
    distance = np.hypot(offset[:, 0], offset[:, 1])
    angle = np.arctan2(offset[:, 1], offset[:, 0])

    def evaluate(orders):
        return bessel_j(orders[None, :], kappa * distance[:, None]) * np.exp(1j * angle[:, None] * orders[None, :])

    start = int(np.ceil(kappa * distance.max())) + settings.j_margin
    G, truncation = truncated_test_functions(evaluate, start, settings)
    return minimize_with_policy(G, truncation, boundary=True, regular_region=True, settings=settings)


def _slaved(mesh: Mesh, node: int, base: ClosestPoint, h: float) -> BoundaryStencil:
    """Interpolate between the boundary value at ``base`` and the node best aligned with the normal."""
    seed = _seed_nodes(mesh, node, base)[1:]
    normal = np.array([mesh.x[node] - base.x, mesh.y[node] - base.y])
    if np.linalg.norm(normal) == 0:
        normal = np.array([mesh.x[node] - mesh.center[0], mesh.y[node] - mesh.center[1]])
    normal /= np.linalg.norm(normal)
    direction = np.column_stack([mesh.x[seed] - base.x, mesh.y[seed] - base.y])
    length = np.linalg.norm(direction, axis=1)
    partner = int(seed[np.argmax(direction @ normal / length)])
    ratio = base.distance / float(np.hypot(mesh.x[partner] - base.x, mesh.y[partner] - base.y))
    LOGGER.info(f'node {node} lies {base.distance:.2e} from the boundary, slaved to node {partner}')
    return BoundaryStencil(
        node=node,
        base=base,
        nodes=np.array([node, partner]),
        coefficients=np.array([1.0, -ratio], dtype=complex),
        boundary=np.array([[base.x, base.y]]),
        boundary_coefficients=np.array([-(1.0 - ratio)], dtype=complex),
        local_h=h,
        slaved=True,
    )


def _boundary_stencil(mesh: Mesh, node: int, base: ClosestPoint, geometry: ScattererGeometry, kappa: float,
                      settings: PollutionSettings) -> BoundaryStencil:
    h = _physical_h(mesh, node)
    if base.distance < SLAVE_DISTANCE * h:
        return _slaved(mesh, node, base, h)
    seed = _seed_nodes(mesh, node, base)
    if len(seed) < MIN_SEED_POINTS:
        raise InsufficientStencil(f'node {node} has only {len(seed)} usable mesh neighbors')
    grid_points = np.column_stack([mesh.x[seed], mesh.y[seed]])
    boundary = boundary_points(geometry, base, h)
    minimized = boundary_stencil_coeffs(grid_points[0], grid_points, boundary, kappa, settings=settings)
    return BoundaryStencil(
        node=node,
        base=base,
        nodes=seed,
        coefficients=minimized.coefficients[:len(seed)],
        boundary=boundary,
        boundary_coefficients=minimized.coefficients[len(seed):],
        local_h=h,
        delta=minimized.delta,
        truncation=minimized.truncation,
        objective=minimized.objective,
        smallest_eigenvalue=minimized.smallest_eigenvalue,
    )


def build_boundary_stencils(mesh: Mesh, kappa: float, *, settings: PollutionSettings = PollutionSettings(),
                            threads: int = 1) -> dict[int, BoundaryStencil]:
    """Boundary stencils of all ``NEAR_BOUNDARY`` nodes of ``mesh``."""
    bases = detect_boundary_nodes(mesh)
    if not bases:
        return {}
    geometry = mesh.geometry

    def compute(item):
        node, base = item
        return node, _boundary_stencil(mesh, node, base, geometry, kappa, settings)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            stencils = dict(executor.map(compute, bases.items()))
    else:
        stencils = dict(map(compute, bases.items()))
    slaved = sum(stencil.slaved for stencil in stencils.values())
    LOGGER.info(f'{len(stencils)} boundary stencils, {slaved} slaved nodes')
    return stencils


def check_source_clearance(mesh: Mesh, source) -> None:
    """Require the source to vanish within three local mesh sizes of every boundary node.

    :raises ConfigurationError: if the source support comes too close to the scatterer.
    """
    if source is None:
        return
    nodes = np.nonzero(mesh.node_class == NodeClass.NEAR_BOUNDARY)[0]
    for node in nodes:
        h = _physical_h(mesh, node)
        if not source.vanishes_near(mesh.x[node], mesh.y[node], SOURCE_CLEARANCE * h):
            raise ConfigurationError(
                f'the source does not vanish within {SOURCE_CLEARANCE:g} h of the boundary node at '
                f'({mesh.x[node]:.4f}, {mesh.y[node]:.4f})'
            )
