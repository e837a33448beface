# -*- coding: utf-8 -*-
"""Exact series solutions, error norms, convergence orders and decay checks."""
from __future__ import annotations

import dataclasses
import typing as t
import warnings

import numpy as np

from .exceptions import AccuracyLoss, InvalidParameter, MeshMismatch
from .log import get_logger
from .mesh import CoordinateSystem, Mesh, NodeClass
from .pml import ComplexTransform, TransformKind, complex_radius
from .specfun import hankel1, hankel1_deriv

__all__ = (
    'SeriesSolution', 'exact_solution', 'series_eval', 'series_on_mesh', 'DecayReport', 'decay_check',
    'LatticeValues', 'ErrorNorms', 'pointwise_errors', 'error_norms', 'convergence_order', 'fitted_order',
    'pollution_reduction', 'convergence_table'
)

LOGGER = get_logger(__name__)

TAIL_TOLERANCE = 1e-14
TAIL_BAND = 5
DECAY_CONSTANT_LIMIT = 10.0


@dataclasses.dataclass(frozen=True)
class SeriesSolution:
    """``u(rho(r), theta) = sum_j a_j H_j(kappa rho(r)) / H_j(kappa r_ref) e^{i j theta}`` around ``center``.

    The coefficients ``a_j`` are the Fourier modes of ``u`` on the circle of radius ``r_ref``.
    """

    orders: np.ndarray
    coefficients: np.ndarray
    kappa: float
    r_ref: float
    transform: ComplexTransform | None = None
    center: tuple[float, float] = (0.0, 0.0)

    def terms(self, z, deriv: int = 0) -> np.ndarray:
        """Radial factors ``a_j kappa^deriv H_j^(deriv)(kappa z) / H_j(kappa r_ref)`` with orders on the last axis."""
        z = np.asarray(z)
        scale = self.coefficients / hankel1(self.orders, self.kappa * self.r_ref)
        if deriv:
            radial = hankel1_deriv(self.orders, deriv, self.kappa * z[..., None]) * self.kappa**deriv
        else:
            radial = hankel1(self.orders, self.kappa * z[..., None])
        return radial * scale

    def trace_modes(self, radius: float) -> np.ndarray:
        """Fourier modes of ``u`` on the physical circle of ``radius`` inside the regular region."""
        return self.terms(np.asarray(float(radius)))


def exact_solution(problem, transform: ComplexTransform | None = None, center=(0.0, 0.0)) -> SeriesSolution | None:
    """Series solution of a source-free problem outside a circle, ``None`` when it has no closed form."""
    scatterer = problem.scatterer
    if problem.source is not None or not getattr(scatterer, 'is_circle', False):
        return None
    if not np.allclose(scatterer.center, center):
        return None
    modes = problem.boundary_data.modes(scatterer.radius, scatterer.center)
    if modes is None:
        return None
    orders, coefficients = modes
    return SeriesSolution(np.asarray(orders), np.asarray(coefficients, dtype=complex), problem.kappa, scatterer.radius,
                          transform, tuple(center))


def _sum_modes(solution: SeriesSolution, z, theta) -> np.ndarray:
    terms = solution.terms(z)
    phases = np.exp(1j * np.multiply.outer(np.asarray(theta), solution.orders))
    contributions = terms * phases
    values = contributions.sum(axis=-1)
    band = np.abs(solution.orders) > np.abs(solution.orders).max() - TAIL_BAND
    tail = np.abs(contributions[..., band]).sum(axis=-1)
    scale = np.maximum(np.abs(values), np.abs(contributions).max(axis=-1, initial=0.0))
    if np.any(tail > TAIL_TOLERANCE * np.maximum(scale, 1e-300)) and np.any(scale > 0):
        warnings.warn(
            f'series truncated at |j| = {np.abs(solution.orders).max()} leaves a relative tail of '
            f'{float(np.max(tail / np.maximum(scale, 1e-300))):.1e}',
            AccuracyLoss,
            stacklevel=3
        )
    return values


def series_eval(solution: SeriesSolution, r, theta) -> np.ndarray:
    """Evaluate the series at physical polar coordinates ``(r, theta)`` around the solution center."""
    r = np.asarray(r, dtype=float)
    z = r.astype(complex) if solution.transform is None else complex_radius(solution.transform, r)
    return _sum_modes(solution, z, theta)


def series_on_mesh(solution: SeriesSolution, mesh: Mesh, nodes=None) -> np.ndarray:
    """Series values at mesh nodes, the regular region and the interface by default.

    The complex radius is computed from the first coordinate of the nodes, so
    nodes of the layer use the same transform as the discretization.
    """
    if nodes is None:
        nodes = np.nonzero(mesh.i <= mesh.i_star)[0]
    nodes = np.asarray(nodes)
    first = mesh.first[nodes]
    if solution.transform is None or solution.transform.kind is TransformKind.IDENTITY:
        z = mesh.r[nodes].astype(complex)
    else:
        rho = solution.transform.eval(first)[0]
        z = np.exp(rho) if mesh.coords is CoordinateSystem.STRETCHED else rho
    return _sum_modes(solution, z, mesh.theta[nodes])


@dataclasses.dataclass
class DecayReport:
    """Measured and estimated mode norms of ``d^k u`` along the layer."""

    radii: np.ndarray
    norms: np.ndarray
    bounds: np.ndarray
    constant: float
    violated: bool

    def as_dict(self) -> dict:
        return {
            'radii': self.radii.tolist(),
            'norms': self.norms.tolist(),
            'bounds': self.bounds.tolist(),
            'constant': self.constant,
            'violated': self.violated,
        }


def decay_check(solution: SeriesSolution, transform: ComplexTransform, kappa: float, k=(0, 0), radii=None,
                samples: int = 9) -> DecayReport:
    """Compare ``||d_z^k1 d_theta^k2 u(z, .)||`` with its exponential decay estimate along the layer.

    The estimate is ``C exp(-kappa Im z Re sqrt(1 - r_star^2 / |z|^2)) (kappa^k1 + |z|^-k1) ||u|_Gamma||_{H^|k|}``;
    the constant ``C`` is fitted and a value above ten is flagged. Norms are
    computed from the Fourier modes, without the common ``2 pi`` factor.

    :param radii: physical radii to sample, ``samples`` radii spanning the layer by default.
    """
    k1, k2 = (int(value) for value in k)
    r_star = transform.physical_r_star
    if radii is None:
        radii = np.linspace(r_star, transform.physical_r_max, samples, endpoint=False)
    radii = np.asarray(radii, dtype=float)
    z = np.atleast_1d(complex_radius(transform, radii)).astype(complex)

    orders = solution.orders
    trace = solution.trace_modes(r_star)
    trace_norm = np.sqrt(np.sum((1.0 + orders**2)**(k1 + k2) * np.abs(trace)**2))
    modes = solution.terms(z, deriv=k1) * (1j * orders)**k2
    norms = np.sqrt(np.sum(np.abs(modes)**2, axis=-1))

    exponent = -kappa * z.imag * np.sqrt(1 - r_star**2 / np.abs(z)**2 + 0j).real
    scale = kappa**k1 + np.abs(z)**-k1 if k1 else np.ones(len(z))
    bounds = np.exp(exponent) * scale * trace_norm
    with np.errstate(divide='ignore', invalid='ignore'):
        ratios = np.where(bounds > 0, norms / bounds, 0.0)
    constant = float(ratios.max(initial=0.0))
    violated = constant > DECAY_CONSTANT_LIMIT
    if violated:
        LOGGER.warning(f'decay estimate of d^{k} u violated with fitted constant {constant:.2e}')
    return DecayReport(radii, norms, bounds, constant, violated)


@dataclasses.dataclass(frozen=True)
class LatticeValues:
    """Nodal values with the lattice description needed to match nodes of nested meshes."""

    coords: CoordinateSystem
    origin: float
    unit: float
    n_theta: int
    i_star: int
    i: np.ndarray
    k: np.ndarray
    values: np.ndarray
    unknown: np.ndarray

    @classmethod
    def from_field(cls, field) -> LatticeValues:
        mesh = field.mesh
        unknown = ~np.isin(mesh.node_class, [NodeClass.DIRICHLET_OUTER, NodeClass.DIRICHLET_SCATTERER])
        return cls(mesh.coords, mesh.origin, mesh.unit, mesh.n_theta, mesh.i_star, mesh.i, mesh.k,
                   np.asarray(field.values), unknown)

    def scale_to(self, finer: LatticeValues) -> tuple[int, int]:
        """Integer factors mapping ``(i, k)`` onto the lattice of ``finer``, ``(0, 0)`` if there are none."""
        if self.coords is not finer.coords or not np.isclose(self.origin, finer.origin, rtol=1e-12, atol=1e-12):
            return 0, 0
        ratio = self.unit / finer.unit
        radial = int(round(ratio))
        if radial < 1 or abs(ratio - radial) > 1e-9 * ratio or finer.n_theta % self.n_theta:
            return 0, 0
        return radial, finer.n_theta // self.n_theta

    def lookup(self, i, k) -> np.ndarray:
        keys = self.i.astype(np.int64) * self.n_theta + self.k
        order = np.argsort(keys, kind='stable')
        sorted_keys = keys[order]
        query = np.asarray(i, dtype=np.int64) * self.n_theta + np.mod(k, self.n_theta)
        position = np.clip(np.searchsorted(sorted_keys, query), 0, len(sorted_keys) - 1)
        return np.where(sorted_keys[position] == query, order[position], -1)


class ErrorNorms(t.NamedTuple):
    linf: float
    l2: float
    compared: int
    unmatched: int


def pointwise_errors(field, reference, mesh: Mesh | None = None) -> tuple[np.ndarray, int]:
    """``|v_h - u|`` at the unknown nodes of the regular region and the interface, NaN elsewhere.

    :param field: :class:`~helmholtz_fd.assembly.SolutionField` or :class:`LatticeValues`.
    :param reference: a :class:`SeriesSolution` evaluated at the nodes, or the values of a finer
        mesh whose lattice contains the nodes of ``field``.
    :return: the errors and the number of compared nodes without a counterpart in the reference.
    :raises MeshMismatch: if no node of ``field`` is found in the reference mesh.
    """
    errors = np.full(len(field.values), np.nan)
    if isinstance(reference, SeriesSolution):
        mesh = mesh or field.mesh
        nodes = np.nonzero((mesh.i <= mesh.i_star) & ~mesh.dirichlet)[0]
        errors[nodes] = np.abs(np.asarray(field.values)[nodes] - series_on_mesh(reference, mesh, nodes))
        return errors, 0

    coarse = field if isinstance(field, LatticeValues) else LatticeValues.from_field(field)
    fine = reference if isinstance(reference, LatticeValues) else LatticeValues.from_field(reference)
    radial, angular = coarse.scale_to(fine)
    if not radial:
        raise MeshMismatch('the reference lattice does not refine the lattice of the solution')
    nodes = np.nonzero((coarse.i <= coarse.i_star) & coarse.unknown)[0]
    matches = fine.lookup(coarse.i[nodes] * radial, coarse.k[nodes] * angular)
    found = matches >= 0
    unmatched = int(np.count_nonzero(~found))
    if len(nodes) and not np.any(found):
        raise MeshMismatch('no node of the solution is part of the reference mesh')
    if unmatched:
        LOGGER.info(f'{unmatched} of {len(nodes)} nodes have no counterpart in the reference mesh')
    errors[nodes[found]] = np.abs(coarse.values[nodes[found]] - fine.values[matches[found]])
    return errors, unmatched


def error_norms(field, reference, mesh: Mesh | None = None) -> ErrorNorms:
    """Discrete ``l_inf`` and ``l_2`` errors, see :func:`pointwise_errors` for the compared nodes.

    The ``l_2`` error is the root mean square over the compared nodes.
    """
    errors, unmatched = pointwise_errors(field, reference, mesh)
    compared = errors[np.isfinite(errors)]
    if not len(compared):
        return ErrorNorms(0.0, 0.0, 0, unmatched)
    return ErrorNorms(float(compared.max()), float(np.sqrt(np.mean(compared**2))), len(compared), unmatched)


def convergence_order(errors) -> list[float]:
    """Orders ``log(e' / e) / log(h' / h)`` of successive ``(h, e)`` pairs with decreasing ``h``."""
    errors = [(float(h), float(e)) for h, e in errors]
    if len(errors) < 2:
        raise InvalidParameter('a convergence order needs at least two errors')
    if any(h_next >= h for (h, _), (h_next, _) in zip(errors, errors[1:])):
        raise InvalidParameter('mesh sizes of a convergence study must decrease strictly')
    return [
        float(np.log(e_coarse / e_fine) / np.log(h_coarse / h_fine))
        for (h_coarse, e_coarse), (h_fine, e_fine) in zip(errors, errors[1:])
    ]


def fitted_order(errors) -> float:
    """Least squares slope of ``log e`` against ``log h``."""
    h, e = np.asarray(list(errors), dtype=float).T
    slope, _ = np.polyfit(np.log(h), np.log(e), 1)
    return float(slope)


def pollution_reduction(e_minimized: float, e_generic: float) -> float:
    """Relative error reduction ``R = 1 - e / e'`` of the minimized over the generic stencils."""
    if e_generic == 0:
        return 0.0 if e_minimized == 0 else -np.inf
    return 1.0 - e_minimized / e_generic


def convergence_table(rows: list, generic: list | None = None) -> list:
    """Add successive orders of both norms and, with the generic errors, the pollution reduction ``R``.

    :param rows: one mapping per mesh with at least ``h``, ``err_linf`` and ``err_l2``.
    :param generic: ``l_inf`` errors of the same meshes with generic stencils, ordered like ``rows``.
    :return: copies of the rows ordered by decreasing ``h``.
    """
    rows = [dict(row) for row in rows]
    for position, row in enumerate(rows):
        row.setdefault('order_linf', None)
        row.setdefault('order_l2', None)
        row['R'] = pollution_reduction(row['err_linf'], generic[position]) if generic else row.get('R')
    rows.sort(key=lambda row: -row['h'])
    for norm in ('linf', 'l2'):
        pairs = [(row['h'], row[f'err_{norm}']) for row in rows]
        if len(pairs) > 1 and all(error > 0 for _, error in pairs):
            for row, order in zip(rows[1:], convergence_order(pairs)):
                row[f'order_{norm}'] = order
    return rows
