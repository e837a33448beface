# -*- coding: utf-8 -*-
"""Regular-polar and exponentially stretched meshes with dyadic refinement.

Every mesh lives on an integer lattice ``(i, k)``: ``i`` counts units of the
first coordinate (``r`` or ``s = log r``) from the innermost row, ``k`` counts
units of ``theta`` and is periodic with ``n_theta``. Stretched meshes are
quadtrees over this lattice: a leaf cell of level ``l`` spans
``2**(finest - l)`` lattice units in both directions. Nodes are leaf corners
plus auxiliary nodes at the centers of coarse leaves that touch finer leaves.
"""
from __future__ import annotations

import dataclasses
import enum
from math import gcd

import numpy as np

from .exceptions import ConfigurationError, GeometryError, RefinementError
from .geometry import CircleScatterer, ScattererGeometry
from .log import get_logger
from .stencils.footprints import Footprint, offsets

__all__ = (
    'CoordinateSystem', 'NodeClass', 'RefinementMode', 'RefinementRegion', 'Refinement', 'Mesh', 'build_regular_polar',
    'build_stretched', 'classify', 'local_h'
)

LOGGER = get_logger(__name__)

TWO_PI = 2 * np.pi
LOG2 = np.log(2.0)
MIN_BAND_ROWS = 2


class CoordinateSystem(enum.Enum):
    REGULAR = 'regular'
    STRETCHED = 'stretched'


class NodeClass(enum.IntEnum):
    INTERIOR = 0
    INTERFACE = 1
    DANGLING_S = 2
    DANGLING_THETA = 3
    AUXILIARY = 4
    NEAR_BOUNDARY = 5
    DIRICHLET_OUTER = 6
    DIRICHLET_SCATTERER = 7

    @property
    def is_dirichlet(self) -> bool:
        return self in (NodeClass.DIRICHLET_OUTER, NodeClass.DIRICHLET_SCATTERER)


class RefinementMode(enum.Enum):
    NONE = 'none'
    UNIFORM = 'uniform'
    ADAPTIVE = 'adaptive'


@dataclasses.dataclass(frozen=True)
class RefinementRegion:
    """Annular sector refined to ``level_offset`` levels beyond the interface spacing.

    ``level_offset = 0`` means the interface spacing, ``1`` half of it.
    """

    r_min: float = 0.0
    r_max: float = np.inf
    theta_min: float = -np.pi
    theta_max: float = np.pi
    level_offset: int = 0

    def contains(self, r, theta):
        theta = np.mod(theta - self.theta_min, TWO_PI)
        width = self.theta_max - self.theta_min
        in_sector = (theta <= width) if width < TWO_PI else np.ones_like(theta, dtype=bool)
        return (r >= self.r_min) & (r <= self.r_max) & in_sector


@dataclasses.dataclass(frozen=True)
class Refinement:
    mode: RefinementMode = RefinementMode.NONE
    regions: tuple[RefinementRegion, ...] = ()
    pml_coarsening: bool = True
    max_depth: int = 6


@dataclasses.dataclass
class Mesh:
    """Node set, classes and lattice geometry of one discretization."""

    coords: CoordinateSystem
    center: tuple[float, float]
    origin: float
    unit: float
    unit_theta: float
    n_theta: int
    i_star: int
    i_max: int
    h: float
    n: int
    i: np.ndarray
    k: np.ndarray
    node_class: np.ndarray
    local_h: np.ndarray
    level: np.ndarray
    auxiliary: np.ndarray
    levels: int = 0
    extra_levels: int = 0
    geometry: ScattererGeometry | None = None
    _keys: np.ndarray = dataclasses.field(default=None, init=False, repr=False)
    _order: np.ndarray = dataclasses.field(default=None, init=False, repr=False)

    def __post_init__(self):
        keys = self.i.astype(np.int64) * self.n_theta + self.k
        self._order = np.argsort(keys, kind='stable')
        self._keys = keys[self._order]
        if np.any(np.diff(self._keys) == 0):
            raise RefinementError('duplicate lattice nodes in mesh')

    # Geometry

    @property
    def size(self) -> int:
        return len(self.i)

    @property
    def gamma(self) -> float:
        """Ratio of the first-coordinate to the angular lattice unit."""
        return self.unit / self.unit_theta

    def first_coordinate(self, i) -> np.ndarray:
        return self.origin + np.asarray(i) * self.unit

    @property
    def first(self) -> np.ndarray:
        return self.first_coordinate(self.i)

    @property
    def theta(self) -> np.ndarray:
        return self.k * self.unit_theta

    @property
    def r(self) -> np.ndarray:
        first = self.first
        return np.exp(first) if self.coords is CoordinateSystem.STRETCHED else first

    @property
    def x(self) -> np.ndarray:
        return self.center[0] + self.r * np.cos(self.theta)

    @property
    def y(self) -> np.ndarray:
        return self.center[1] + self.r * np.sin(self.theta)

    @property
    def first_star(self) -> float:
        return float(self.first_coordinate(self.i_star))

    @property
    def first_max(self) -> float:
        return float(self.first_coordinate(self.i_max))

    @property
    def r_star(self) -> float:
        return float(np.exp(self.first_star)) if self.coords is CoordinateSystem.STRETCHED else self.first_star

    @property
    def r_max(self) -> float:
        return float(np.exp(self.first_max)) if self.coords is CoordinateSystem.STRETCHED else self.first_max

    @property
    def dirichlet(self) -> np.ndarray:
        return (self.node_class == NodeClass.DIRICHLET_OUTER) | (self.node_class == NodeClass.DIRICHLET_SCATTERER)

    # Topology

    def lookup(self, i, k) -> np.ndarray:
        """Node ids at lattice positions ``(i, k)``, ``-1`` where there is no node."""
        i = np.asarray(i, dtype=np.int64)
        k = np.mod(np.asarray(k, dtype=np.int64), self.n_theta)
        keys = i * self.n_theta + k
        position = np.searchsorted(self._keys, keys)
        position = np.clip(position, 0, len(self._keys) - 1)
        found = (self._keys[position] == keys) & (i >= 0) & (i <= self.i_max)
        return np.where(found, self._order[position], -1)

    def neighbors(self, nodes, lattice_offsets) -> np.ndarray:
        """Ids of ``nodes + offsets`` with shape ``(len(nodes), len(offsets))``."""
        nodes = np.asarray(nodes)
        lattice_offsets = np.asarray(lattice_offsets)
        return self.lookup(
            self.i[nodes, None] + lattice_offsets[None, :, 0], self.k[nodes, None] + lattice_offsets[None, :, 1]
        )

    def region(self, nodes=None) -> np.ndarray:
        """``-1`` inside the regular region, ``0`` on the interface, ``1`` in the layer."""
        i = self.i if nodes is None else self.i[nodes]
        return np.sign(i - self.i_star)

    def lattice_scale(self, other: Mesh) -> int:
        """Integer factor mapping lattice indices of ``self`` onto those of the finer ``other``."""
        ratio = self.unit / other.unit
        scale = int(round(ratio))
        if scale < 1 or abs(ratio - scale) > 1e-9 * ratio or abs(self.origin - other.origin) > 1e-12 * max(
            1.0, abs(self.origin)
        ) or self.coords is not other.coords:
            return 0
        return scale

    def stats(self) -> dict:
        counts = {cls.name.lower(): int(np.count_nonzero(self.node_class == cls)) for cls in NodeClass}
        return {
            'coords': self.coords.value,
            'n': self.n,
            'h': self.h,
            'nodes': self.size,
            'unknowns': int(self.size - np.count_nonzero(self.dirichlet)),
            'levels': self.levels,
            'extra_levels': self.extra_levels,
            'r_star': self.r_star,
            'r_max': self.r_max,
            'classes': counts,
        }


def local_h(mesh: Mesh, node: int) -> float:
    """Local mesh size of ``node`` in units of the first coordinate."""
    return float(mesh.local_h[node] * mesh.unit)


def _snap_unit(n: int, snap_divisor: int | None) -> int:
    snap = n if snap_divisor is None else int(snap_divisor)
    if snap <= 0 or n % snap:
        raise ConfigurationError(f'snap divisor {snap} must divide N = {n}')
    return snap


def build_regular_polar(
    kappa: float,
    r_star_target: float,
    r_max_target: float,
    n: int,
    scatterer_radius: float,
    *,
    snap_divisor: int | None = None,
    center=(0.0, 0.0),
) -> Mesh:
    """Uniform ``(r, theta)`` mesh with ``h = 2 pi r_star / N`` and ``h_theta = 2 pi / N``.

    The rows start on the scatterer, ``r_star`` and ``r_max`` are rounded to
    the nearest rows of the coarsest mesh of the study (``snap_divisor``).
    """
    del kappa
    if n < 8:
        raise ConfigurationError(f'N must be at least 8, got {n}')
    if scatterer_radius >= r_star_target:
        raise GeometryError(f'scatterer radius {scatterer_radius} must be smaller than r_star {r_star_target}')
    if r_max_target <= r_star_target:
        raise GeometryError(f'r_max {r_max_target} must exceed r_star {r_star_target}')
    snap = _snap_unit(n, snap_divisor)
    h = TWO_PI * r_star_target / n
    factor = n // snap
    i_star = factor * max(MIN_BAND_ROWS, int(round((r_star_target - scatterer_radius) / (h * factor))))
    i_max = i_star + factor * max(MIN_BAND_ROWS, int(round((r_max_target - r_star_target) / (h * factor))))

    i, k = np.meshgrid(np.arange(i_max + 1), np.arange(n), indexing='ij')
    i, k = i.ravel(), k.ravel()
    node_class = np.full(i.shape, NodeClass.INTERIOR, dtype=np.int8)
    node_class[i == i_star] = NodeClass.INTERFACE
    node_class[i == 0] = NodeClass.DIRICHLET_SCATTERER
    node_class[i == i_max] = NodeClass.DIRICHLET_OUTER
    mesh = Mesh(
        coords=CoordinateSystem.REGULAR,
        center=tuple(center),
        origin=float(scatterer_radius),
        unit=h,
        unit_theta=TWO_PI / n,
        n_theta=n,
        i_star=i_star,
        i_max=i_max,
        h=h,
        n=n,
        i=i,
        k=k,
        node_class=node_class,
        local_h=np.ones(i.shape, dtype=np.int64),
        level=np.zeros(i.shape, dtype=np.int64),
        auxiliary=np.zeros(i.shape, dtype=bool),
        geometry=CircleScatterer(scatterer_radius, center),
    )
    LOGGER.info(f'regular polar mesh N={n}: {mesh.size} nodes, r_star={mesh.r_star:.6f}, r_max={mesh.r_max:.6f}')
    return mesh


def _plan_bands(star: int, outer_rows: int, snap_h: float, n: int, snap: int,
                refinement: Refinement) -> tuple[list[int], list[int], int]:
    """Choose the radial bands in units of ``snap_h``.

    Transitions sit where ``s`` has grown by a multiple of ``log 2`` from the
    innermost row, rounded onto the coarse lattice of the band below. Returns
    the band edges, the band levels and the number of dyadic levels.
    """
    depth = 0 if refinement.mode is RefinementMode.NONE else refinement.max_depth
    levels, edges = 0, [0]
    for candidate in range(depth, 0, -1):
        if n % 2**candidate or snap % 2**candidate:
            continue
        trial = [0]
        for step in range(1, candidate + 1):
            block = 2**(candidate - step + 1)
            edge = block * int(round(step * LOG2 / snap_h / block))
            if edge - trial[-1] < MIN_BAND_ROWS * block:
                break
            trial.append(edge)
        else:
            if star - trial[-1] >= MIN_BAND_ROWS:
                levels, edges = candidate, trial
                break

    edges = edges + [star]
    band_levels = list(range(levels + 1))
    if refinement.pml_coarsening and levels >= 1:
        fine_end = star + MIN_BAND_ROWS
        fine_end += fine_end % 2
        coarse_rows = 2 * int(round((star + outer_rows - fine_end) / 2))
        if coarse_rows >= 2 * MIN_BAND_ROWS and fine_end + coarse_rows <= star + outer_rows + 1:
            return edges + [fine_end, fine_end + coarse_rows], band_levels + [levels, levels - 1], levels
    return edges + [star + outer_rows], band_levels + [levels], levels


def build_stretched(
    kappa: float,
    r_star_target: float,
    r_max_target: float,
    n: int,
    scatterer: ScattererGeometry | float,
    refinement: Refinement | None = None,
    *,
    snap_divisor: int | None = None,
    center=(0.0, 0.0),
) -> Mesh:
    """Mesh in ``(s, theta)`` with ``h_s = h_theta = 2 pi / N`` at the interface.

    Inside the regular region the cells double in size every time ``s`` drops by
    ``log 2`` (``UNIFORM``), adaptive regions add finer levels on top, and the
    layer is coarsened once after two interface rows when that fits.
    """
    refinement = refinement or Refinement()
    if n < 8:
        raise ConfigurationError(f'N must be at least 8, got {n}')
    if isinstance(scatterer, (int, float)):
        scatterer = CircleScatterer(float(scatterer), center)
    if r_max_target <= r_star_target:
        raise GeometryError(f'r_max {r_max_target} must exceed r_star {r_star_target}')

    circular = scatterer.is_circle and np.allclose(scatterer.center, center)
    if circular:
        r_inner = scatterer.radius
    else:
        r_inner = scatterer.inner_radius(center)
        _, reach = scatterer.boundary_radius_range(center)
        if reach >= r_star_target:
            raise GeometryError(f'scatterer reaches r = {reach:.4f} beyond r_star = {r_star_target}')
    if r_inner >= r_star_target:
        raise GeometryError(f'scatterer radius {r_inner} must be smaller than r_star {r_star_target}')

    snap = _snap_unit(n, snap_divisor)
    s0 = float(np.log(r_inner))
    snap_h = TWO_PI / snap
    star = max(MIN_BAND_ROWS, int(round((np.log(r_star_target) - s0) / snap_h)))
    outer_rows = max(MIN_BAND_ROWS, int(round((np.log(r_max_target) - s0) / snap_h)) - star)
    edges, band_levels, levels = _plan_bands(star, outer_rows, snap_h, n, snap, refinement)

    regions = refinement.regions if refinement.mode is RefinementMode.ADAPTIVE else ()
    extra = max((max(region.level_offset, 0) for region in regions), default=0)
    finest = levels + extra
    factor = (n // snap) * 2**extra
    unit = TWO_PI / (n * 2**extra)
    n_theta = n * 2**extra
    i_star, i_max = star * factor, edges[-1] * factor

    desired = _desired_levels(edges, band_levels, factor, i_max, n_theta, finest)
    if regions:
        _refine_regions(desired, regions, i_star - 3 * 2**extra, s0, unit, levels)
    leaf = _balanced_leaves(desired, finest)
    i, k, level, auxiliary, cell = _nodes_from_leaves(leaf, finest, i_max, n_theta)

    if not circular:
        r = np.exp(s0 + i * unit)
        theta = k * unit
        keep = ~scatterer.contains(center[0] + r * np.cos(theta), center[1] + r * np.sin(theta))
        i, k, level, auxiliary, cell = i[keep], k[keep], level[keep], auxiliary[keep], cell[keep]

    mesh = Mesh(
        coords=CoordinateSystem.STRETCHED,
        center=tuple(center),
        origin=s0,
        unit=unit,
        unit_theta=unit,
        n_theta=n_theta,
        i_star=i_star,
        i_max=i_max,
        h=TWO_PI * r_star_target / n,
        n=n,
        i=i,
        k=k,
        node_class=np.full(i.shape, -1, dtype=np.int8),
        local_h=np.where(auxiliary, cell // 2, 2**(finest - level)).astype(np.int64),
        level=level,
        auxiliary=auxiliary,
        levels=levels,
        extra_levels=extra,
        geometry=scatterer,
    )
    classify(mesh, circular=circular)
    LOGGER.info(
        f'stretched mesh N={n} (kappa h = {kappa * mesh.h:.4f}): {mesh.size} nodes, {levels} dyadic levels, '
        f'{extra} adaptive levels, r_star={mesh.r_star:.6f}, r_max={mesh.r_max:.6f}'
    )
    return mesh


def _desired_levels(edges, band_levels, factor, i_max, n_theta, finest) -> np.ndarray:
    """Level wanted by each finest cell, padded to whole blocks of the coarsest level."""
    block = 2**finest
    rows = -(-i_max // block) * block
    row_level = np.full(rows, band_levels[-1], dtype=np.int64)
    for start, stop, level in zip(edges[:-1], edges[1:], band_levels):
        row_level[start * factor:stop * factor] = level
    return np.repeat(row_level[:, None], n_theta, axis=1)


def _refine_regions(desired: np.ndarray, regions, limit: int, s0: float, unit: float, levels: int):
    """Raise the wanted level inside annular sectors, below row ``limit`` only."""
    limit = max(limit, 0)
    r = np.exp(s0 + (np.arange(limit) + 0.5) * unit)
    theta = (np.arange(desired.shape[1]) + 0.5) * unit
    inner = desired[:limit]
    for region in regions:
        mask = region.contains(r[:, None], theta[None, :])
        inner[mask] = np.maximum(inner[mask], levels + region.level_offset)


def _leaf_levels(desired: np.ndarray, finest: int) -> np.ndarray:
    """Level of the leaf containing each finest cell.

    A cell belongs to the coarsest aligned block whose wanted levels do not
    exceed the block level.
    """
    rows, cols = desired.shape
    leaf = np.full(desired.shape, -1, dtype=np.int64)
    for level in range(finest + 1):
        size = 2**(finest - level)
        blocks = desired.reshape(rows // size, size, cols // size, size).max(axis=(1, 3))
        wanted = np.repeat(np.repeat(blocks, size, axis=0), size, axis=1)
        leaf[(leaf < 0) & (wanted <= level)] = level
    return leaf


def _neighbor_max(leaf: np.ndarray) -> np.ndarray:
    """Largest value among the four edge neighbors, periodic in theta."""
    neighbor = np.maximum(np.roll(leaf, 1, axis=1), np.roll(leaf, -1, axis=1))
    neighbor[1:] = np.maximum(neighbor[1:], leaf[:-1])
    neighbor[:-1] = np.maximum(neighbor[:-1], leaf[1:])
    return neighbor


def _balanced_leaves(desired: np.ndarray, finest: int) -> np.ndarray:
    """Leaf levels after enforcing that edge-adjacent leaves differ by at most one level."""
    desired = desired.copy()
    while True:
        leaf = _leaf_levels(desired, finest)
        required = _neighbor_max(leaf) - 1
        unbalanced = required > leaf
        if not np.any(unbalanced):
            return leaf
        desired[unbalanced] = np.maximum(desired[unbalanced], required[unbalanced])


def _nodes_from_leaves(leaf: np.ndarray, finest: int, i_max: int, n_theta: int):
    """Leaf corners and auxiliary centers as lattice indices.

    Returns ``(i, k, level, auxiliary, cell)``. Corners shared by leaves of
    different levels take the finest one; ``cell`` is the size of the owning
    leaf for auxiliary nodes and zero otherwise.
    """
    rows = leaf.shape[0]
    inside = leaf.copy()
    inside[i_max:] = -1
    neighbor = _neighbor_max(inside)

    keys, corner_levels = [], []
    aux_i, aux_k, aux_level, aux_cell = [], [], [], []
    for level in range(finest + 1):
        size = 2**(finest - level)
        oi, ok = np.nonzero(inside[::size, ::size] == level)
        oi, ok = oi * size, ok * size
        if not len(oi):
            continue
        for di, dk in ((0, 0), (size, 0), (0, size), (size, size)):
            keys.append((oi + di).astype(np.int64) * n_theta + np.mod(ok + dk, n_theta))
            corner_levels.append(np.full(oi.shape, level))
        if size >= 2:
            finer = neighbor.reshape(rows // size, size, n_theta // size, size).max(axis=(1, 3))
            touch = finer[oi // size, ok // size] > level
            aux_i.append(oi[touch] + size // 2)
            aux_k.append(ok[touch] + size // 2)
            aux_level.append(np.full(np.count_nonzero(touch), level))
            aux_cell.append(np.full(np.count_nonzero(touch), size))

    keys = np.concatenate(keys)
    levels = np.concatenate(corner_levels)
    order = np.lexsort((-levels, keys))
    keys, levels = keys[order], levels[order]
    unique = np.ones(keys.shape, dtype=bool)
    unique[1:] = keys[1:] != keys[:-1]
    keys, levels = keys[unique], levels[unique]

    empty = np.zeros(0, dtype=np.int64)
    ai = np.concatenate(aux_i) if aux_i else empty
    ak = np.concatenate(aux_k) if aux_k else empty
    al = np.concatenate(aux_level) if aux_level else empty
    ac = np.concatenate(aux_cell) if aux_cell else empty
    order = np.lexsort((ak, ai))
    return (
        np.concatenate([keys // n_theta, ai[order]]).astype(np.int64),
        np.concatenate([keys % n_theta, ak[order]]).astype(np.int64),
        np.concatenate([levels, al[order]]).astype(np.int64),
        np.concatenate([np.zeros(keys.shape, dtype=bool), np.ones(ai.shape, dtype=bool)]),
        np.concatenate([np.zeros(keys.shape, dtype=np.int64), ac[order]]).astype(np.int64),
    )


def _footprint_present(mesh: Mesh, nodes: np.ndarray, footprint: Footprint, spacing) -> np.ndarray:
    lattice = offsets(footprint)
    spacing = np.broadcast_to(np.asarray(spacing), nodes.shape)
    ids = mesh.lookup(
        mesh.i[nodes, None] + lattice[None, :, 0] * spacing[:, None],
        mesh.k[nodes, None] + lattice[None, :, 1] * spacing[:, None],
    )
    return np.all(ids >= 0, axis=1)


def _touches_scatterer(mesh: Mesh, nodes: np.ndarray, spacing: np.ndarray) -> np.ndarray:
    """``True`` where points up to ``1.5 spacing`` around a node fall inside the scatterer."""
    touched = np.zeros(nodes.shape, dtype=bool)
    if mesh.geometry is None or not len(nodes):
        return touched
    for fraction in (0.5, 1.0, 1.5):
        for di in (-1, 0, 1):
            for dk in (-1, 0, 1):
                if di == dk == 0:
                    continue
                first = mesh.first_coordinate(mesh.i[nodes] + fraction * di * spacing)
                r = np.exp(first) if mesh.coords is CoordinateSystem.STRETCHED else first
                theta = (mesh.k[nodes] + fraction * dk * spacing) * mesh.unit_theta
                x = mesh.center[0] + r * np.cos(theta)
                touched |= mesh.geometry.contains(x, mesh.center[1] + r * np.sin(theta))
    return touched


def classify(mesh: Mesh, circular: bool = True) -> np.ndarray:
    """Assign a :class:`NodeClass` and a local mesh size to every node of a stretched mesh.

    Precedence: Dirichlet rows, the interface, nodes near a non-circular
    scatterer, compact footprints at the smallest spacing, dangling patterns,
    auxiliary nodes. Unmatched nodes raise :class:`RefinementError`.
    """
    cls = np.full(mesh.size, -1, dtype=np.int64)
    natural = mesh.local_h.copy()
    spacing = natural.copy()

    cls[mesh.i == mesh.i_max] = NodeClass.DIRICHLET_OUTER
    if circular:
        cls[mesh.i == 0] = NodeClass.DIRICHLET_SCATTERER

    interface = np.nonzero((mesh.i == mesh.i_star) & ~mesh.auxiliary)[0]
    cls[interface] = NodeClass.INTERFACE
    spacing[interface] = 2**mesh.extra_levels
    present = _footprint_present(mesh, interface, Footprint.INTERFACE, 2**mesh.extra_levels)
    if not np.all(present):
        node = int(interface[~present][0])
        raise RefinementError(f'interface node at lattice ({mesh.i[node]}, {mesh.k[node]}) lacks its 3x5 footprint')

    if not circular:
        todo = np.nonzero(cls < 0)[0]
        cls[todo[_touches_scatterer(mesh, todo, natural[todo])]] = NodeClass.NEAR_BOUNDARY

    regular = np.nonzero((cls < 0) & ~mesh.auxiliary)[0]
    candidates = [2**p for p in range(mesh.levels + mesh.extra_levels + 1)]
    for d in candidates:
        todo = regular[cls[regular] < 0]
        in_layer = mesh.i[todo] > mesh.i_star
        ok = np.where(
            in_layer,
            _footprint_present(mesh, todo, Footprint.INTERIOR_PML, d),
            _footprint_present(mesh, todo, Footprint.INTERIOR, d),
        )
        cls[todo[ok]] = NodeClass.INTERIOR
        spacing[todo[ok]] = d
    for d in candidates:
        for footprint, node_class in ((Footprint.DANGLING_S, NodeClass.DANGLING_S),
                                      (Footprint.DANGLING_THETA, NodeClass.DANGLING_THETA)):
            todo = regular[cls[regular] < 0]
            ok = _footprint_present(mesh, todo, footprint, d)
            cls[todo[ok]] = node_class
            spacing[todo[ok]] = d

    aux = np.nonzero((cls < 0) & mesh.auxiliary)[0]
    ok = np.where(
        mesh.i[aux] > mesh.i_star,
        _footprint_present(mesh, aux, Footprint.AUXILIARY_PML, natural[aux]),
        _footprint_present(mesh, aux, Footprint.AUXILIARY, natural[aux]),
    )
    cls[aux[ok]] = NodeClass.AUXILIARY

    if not circular:
        # footprints must not bridge across the scatterer
        usable = np.nonzero(np.isin(cls, [NodeClass.INTERIOR, NodeClass.DANGLING_S, NodeClass.DANGLING_THETA,
                                          NodeClass.AUXILIARY]))[0]
        reach = np.where(cls[usable] == NodeClass.INTERIOR, 1, 2) * spacing[usable]
        bridged = usable[_touches_scatterer(mesh, usable, reach)]
        cls[bridged] = NodeClass.NEAR_BOUNDARY
        spacing[bridged] = natural[bridged]
        leftover = np.nonzero(cls < 0)[0]
        cls[leftover[_touches_scatterer(mesh, leftover, 2 * natural[leftover])]] = NodeClass.NEAR_BOUNDARY

    leftover = np.nonzero(cls < 0)[0]
    if len(leftover):
        node = int(leftover[0])
        raise RefinementError(
            f'{len(leftover)} nodes match no reference stencil, first at lattice ({mesh.i[node]}, {mesh.k[node]}); '
            'refinement transitions are too close to each other'
        )
    mesh.node_class = cls.astype(np.int8)
    mesh.local_h = spacing.astype(np.int64)
    return mesh.node_class


def study_snap_divisor(values) -> int:
    """Common divisor of the ``N`` values of a study, used to snap every mesh onto the same radii."""
    divisor = 0
    for value in values:
        divisor = gcd(divisor, int(value))
    return divisor
