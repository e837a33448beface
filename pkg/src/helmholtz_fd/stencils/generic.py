# -*- coding: utf-8 -*-
"""Stencils from order conditions.

The Taylor coefficients ``d^(k1, k2) v`` with ``k1 >= 2`` are eliminated by
differentiating the normal form of the equation, so a smooth solution around
the center is described by the derivatives with multi-index in::

    Pi_K = {(l1, l2): l1 <= 1, l1 + l2 <= K}

and by the derivatives of ``f~``. Writing the stencil coefficients as
``C_p = sum_j c_{p, j} h^j`` and collecting powers of ``h`` yields a lower
triangular family of linear systems for ``c_{p, j}``.
"""
from __future__ import annotations

import dataclasses
from math import comb, factorial

import numpy as np
from scipy import linalg

from ..exceptions import AmbiguousStencil, NoNontrivialSolution, NotOnInterface, OrderUnreachable, RankDeficient
from ..jets import Jet
from ..log import get_logger
from ..mesh import CoordinateSystem
from .pde import PdeCoeffs

__all__ = (
    'ExpansionTable', 'reduce_taylor', 'interface_jump_fold', 'solve_cpj', 'local_truncation', 'max_order',
    'unknown_indices', 'source_indices'
)

LOGGER = get_logger(__name__)

MAX_ORDER = {CoordinateSystem.REGULAR: 4, CoordinateSystem.STRETCHED: 6}
SOLVE_TOLERANCE = 1e-8


def unknown_indices(order: int) -> list[tuple[int, int]]:
    """Multi-indices ``Pi_order`` of the free Taylor coefficients."""
    return [(0, n2) for n2 in range(order + 1)] + [(1, n2) for n2 in range(order)]


def source_indices(order: int) -> list[tuple[int, int]]:
    """Multi-indices of the source derivatives up to total degree ``order``."""
    return [(m1, m2) for total in range(order + 1) for m1 in range(total + 1) for m2 in (total - m1,)]


def max_order(coords: CoordinateSystem, beta: complex = 1.0) -> int:
    """Highest consistency order of the compact stencils in ``coords``."""
    if coords is CoordinateSystem.REGULAR and not np.isclose(beta, 1.0):
        return 3
    return MAX_ORDER[coords]


@dataclasses.dataclass
class ExpansionTable:
    """Expansion of ``v`` at the stencil points in terms of the free Taylor data.

    ``A[k, l, p]`` is the coefficient of ``h^k d^l v`` in ``v(center + p h)``,
    ``S[p, m]`` the coefficient of ``d^m f~`` (with the actual ``h``).
    ``points`` are the offsets in units of ``h`` along both coordinates.
    """

    order: int
    h: float
    points: np.ndarray
    A: np.ndarray
    S: np.ndarray
    unknowns: list
    sources: list

    def source_functional(self, derivatives) -> np.ndarray:
        """Return ``F(p)`` from the source derivatives indexed like :attr:`sources`."""
        return self.S @ np.asarray(derivatives)


def _reduction(a, b, kappa_tilde, total: int):
    """Express ``d^n v`` for ``|n| <= total`` through ``Pi_total`` and the source derivatives.

    :return: dictionaries ``n -> row over unknowns`` and ``n -> row over sources``.
    """
    unknowns = unknown_indices(total)
    sources = source_indices(max(total - 2, 0))
    unknown_position = {index: column for column, index in enumerate(unknowns)}
    source_position = {index: column for column, index in enumerate(sources)}
    reduced, forced = {}, {}
    for n1 in range(total + 1):
        for n2 in range(total + 1 - n1):
            row = np.zeros(len(unknowns), dtype=complex)
            load = np.zeros(len(sources), dtype=complex)
            if n1 <= 1:
                row[unknown_position[(n1, n2)]] = 1.0
            else:
                load[source_position[(n1 - 2, n2)]] = 1.0
                for m in range(n1 - 1):
                    weight = comb(n1 - 2, m)
                    d = n1 - 2 - m
                    for coefficient, index in ((a[d], (m, n2 + 2)), (b[d], (m + 1, n2)), (kappa_tilde[d], (m, n2))):
                        if coefficient != 0:
                            row += weight * coefficient * reduced[index]
                            load += weight * coefficient * forced[index]
            reduced[(n1, n2)] = row
            forced[(n1, n2)] = load
    return reduced, forced, unknowns, sources


def _monomials(points: np.ndarray, total: int) -> dict:
    """``p1^n1 p2^n2 / (n1! n2!)`` for every multi-index up to ``total``."""
    return {(n1, n2): points[:, 0]**n1 * points[:, 1]**n2 / (factorial(n1) * factorial(n2))
            for n1 in range(total + 1) for n2 in range(total + 1 - n1)}


def _table(derivatives, points: np.ndarray, h: float, order: int) -> ExpansionTable:
    total = order + 1
    reduced, forced, unknowns, sources = _reduction(*derivatives, total)
    weights = _monomials(points, total)
    A = np.zeros((total + 1, len(unknowns), len(points)), dtype=complex)
    S = np.zeros((len(points), len(sources)), dtype=complex)
    for (n1, n2), row in reduced.items():
        degree = n1 + n2
        A[degree] += row[:, None] * weights[(n1, n2)][None, :]
        S += h**degree * weights[(n1, n2)][:, None] * forced[(n1, n2)][None, :]
    return ExpansionTable(order, h, points, A, S, unknowns, sources)


def reduce_taylor(coeffs: PdeCoeffs, center: float, offsets, h: float, order: int, *, theta_ratio: float = 1.0,
                  side: str = 'left') -> ExpansionTable:
    """Build the expansion table of a stencil around the first coordinate ``center``.

    :param offsets: ``(n, 2)`` stencil offsets in units of the local mesh size.
    :param h: local mesh size along the first coordinate.
    :param theta_ratio: angular step divided by ``h``.
    :raises OrderUnreachable: if ``order`` exceeds what the coordinate system supports.
    """
    limit = MAX_ORDER[coeffs.coords]
    if order > limit:
        raise OrderUnreachable(f'order {order} exceeds the maximum {limit} of {coeffs.coords.value} stencils')
    points = np.asarray(offsets, dtype=float) * np.array([1.0, theta_ratio])
    derivatives = coeffs.derivatives(center, order + 1, side=side)
    return _table(derivatives, points, h, order)


def interface_jump_fold(coeffs: PdeCoeffs, center: float, offsets, h: float, order: int, *,
                        theta_ratio: float = 1.0) -> ExpansionTable:
    """Expansion table of an interface stencil in terms of the one-sided derivatives of the regular side.

    Points with ``p1 > 0`` use the layer coefficients and ``d^l v+ = beta d^l v-``
    for ``l1 = 1``; tangential derivatives are continuous.

    :raises NotOnInterface: if ``center`` is not the interface coordinate.
    """
    if not np.isclose(center, coeffs.first_star, rtol=0, atol=1e-12 * max(1.0, abs(coeffs.first_star))):
        raise NotOnInterface(f'{center} is not on the interface {coeffs.first_star}')
    left = reduce_taylor(coeffs, coeffs.first_star, offsets, h, order, theta_ratio=theta_ratio, side='left')
    right = reduce_taylor(coeffs, coeffs.first_star, offsets, h, order, theta_ratio=theta_ratio, side='right')
    jump = np.array([coeffs.beta if l1 == 1 else 1.0 for l1, _ in right.unknowns])
    outer = left.points[:, 0] > 0
    A = np.where(outer[None, None, :], right.A * jump[None, :, None], left.A)
    S = np.where(outer[:, None], right.S, left.S)
    return ExpansionTable(order, h, left.points, A, S, left.unknowns, left.sources)


def _order_system(table: ExpansionTable):
    """Stack the systems of all powers ``h^(|l| + j)`` with the unknowns ``c_{p, j}``."""
    order = table.order
    n_points = len(table.points)
    blocks = order + 2
    degree = np.array([l1 + l2 for l1, l2 in table.unknowns])
    rows = []
    for j in range(blocks):
        selected = np.nonzero(degree <= order + 1 - j)[0]
        for row in selected:
            equation = np.zeros((blocks, n_points), dtype=complex)
            for k in range(j + 1):
                equation[k] = table.A[degree[row] + j - k, row]
            rows.append(equation.ravel())
    return np.array(rows), n_points, blocks


def solve_cpj(table: ExpansionTable, *, minimum_norm: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Solve the order conditions of ``table``.

    The leading conditions must fix the zeroth-order stencil up to scaling. With
    ``minimum_norm`` a larger null space is accepted and the minimum norm solution
    of the stacked conditions is returned.

    :return: ``(c, C)`` with ``c[j, p] = c_{p, j}`` and ``C_p = sum_j c_{p, j} h^j``
        normalized to ``C_center = 1`` (the center is the first point).
    :raises NoNontrivialSolution: if the leading system only admits ``c = 0`` or
        the higher order systems are inconsistent.
    :raises AmbiguousStencil: if the null space of the leading system is larger than one
        dimension and ``minimum_norm`` is not set.
    :raises RankDeficient: if the coefficient data is not finite or the center
        coefficient cannot be normalized.
    """
    if not (np.all(np.isfinite(table.A)) and np.all(np.isfinite(table.S))):
        raise RankDeficient('non-finite coefficients in the expansion table')
    matrix, n_points, blocks = _order_system(table)

    degree = np.array([l1 + l2 for l1, l2 in table.unknowns])
    leading = table.A[degree, np.arange(len(degree))]
    singular = linalg.svdvals(leading) if leading.size else np.zeros(0)
    scale = singular[0] if len(singular) and singular[0] > 0 else 1.0
    rank = int(np.count_nonzero(singular > 1e-10 * scale))
    nullity = n_points - rank
    if nullity == 0:
        raise NoNontrivialSolution(
            f'the leading order conditions of order {table.order} only admit the zero stencil on {n_points} points'
        )
    if nullity > 1 and not minimum_norm:
        raise AmbiguousStencil(
            f'the leading order conditions of order {table.order} leave {nullity} independent stencils '
            f'on {n_points} points'
        )

    normalization = np.zeros((blocks, blocks * n_points), dtype=complex)
    for j in range(blocks):
        normalization[j, j * n_points] = 1.0
    system = np.vstack([matrix, normalization])
    rhs = np.zeros(len(system), dtype=complex)
    rhs[len(matrix)] = 1.0
    solution, *_ = linalg.lstsq(system, rhs)
    residual = np.linalg.norm(system @ solution - rhs)
    if residual > SOLVE_TOLERANCE * max(1.0, np.linalg.norm(solution)):
        raise NoNontrivialSolution(
            f'the order conditions of order {table.order} are inconsistent on {n_points} points '
            f'(residual {residual:.2e})'
        )

    c = solution.reshape(blocks, n_points)
    if abs(c[0, 0]) < 1e-12 * np.abs(c[0]).max(initial=0.0):
        raise RankDeficient('the leading stencil vanishes at the center')
    powers = table.h**np.arange(blocks)
    C = powers @ c
    if C[0] == 0 or not np.all(np.isfinite(C)):
        raise RankDeficient('stencil coefficients cannot be normalized at the center')
    LOGGER.debug(f'order {table.order} stencil on {n_points} points, leading nullity {nullity}')
    return c, C / C[0]


def source_derivatives(jet: Jet | None, sources: list, shape=()) -> np.ndarray:
    """Values ``d^m f~`` ordered like ``sources``, zeros when there is no source."""
    if jet is None:
        return np.zeros(tuple(shape) + (len(sources),), dtype=complex)
    return np.stack([jet.derivative(m1, m2) for m1, m2 in sources], axis=-1)


def local_truncation(table: ExpansionTable, coefficients, values, source=None) -> complex:
    """Return ``sum_p C_p v(p) - sum_p C_p F(p)``.

    :param coefficients: stencil coefficients ``C_p`` on the points of ``table``.
    :param values: the solution at the stencil points.
    :param source: source derivatives ordered like ``table.sources``; ``None`` means ``f~ = 0``.
    """
    coefficients = np.asarray(coefficients)
    total = coefficients @ np.asarray(values)
    if source is not None:
        total -= coefficients @ table.source_functional(source)
    return complex(total)
