# -*- coding: utf-8 -*-
"""Stencil coefficients with reduced pollution.

The coefficients ``a`` (normalized by ``a_center = 1``) minimize::

    I(a) = sum_{|j| <= J} |sum_p a_p gamma_{p, j}|^2 + delta |a|^2

where ``gamma_{p, j}`` are the values at the stencil points of the outgoing
test functions ``F_j(kappa R) e^{i j theta}``, scaled to match at the interface.
Bessel functions are used for centers in the regular region and on the
interface, Hankel functions in the layer.
"""
from __future__ import annotations

import dataclasses
import warnings

import numpy as np
from scipy import linalg

from ..exceptions import SingularGram, TruncationCapReached
from ..log import get_logger
from ..mesh import CoordinateSystem
from ..specfun import CylFunKind, cylinder_function
from .pde import PdeCoeffs

__all__ = (
    'PollutionSettings', 'GramSystem', 'test_function_coeffs', 'truncated_test_functions', 'gram', 'minimize',
    'objective', 'delta_policy', 'generic_fallback_gate', 'MinimizedStencil', 'minimize_with_policy',
    'minimized_stencil'
)

LOGGER = get_logger(__name__)

J_STEP = 10


@dataclasses.dataclass(frozen=True)
class PollutionSettings:
    delta_floor: float = 1e-14
    delta_factor: float = 0.01
    fallback_kappa_h: float = 0.15
    j_cap: int = 2000
    j_margin: int = 20
    j_tol: float = 1e-18


@dataclasses.dataclass
class GramSystem:
    """Regularized Gram matrix ``w = conj(G) G^T + delta I`` of the test functions ``G[p, j]``."""

    G: np.ndarray
    delta: float
    w: np.ndarray
    truncation: int

    @property
    def smallest_eigenvalue(self) -> float:
        return float(linalg.eigvalsh(self.w, subset_by_index=[0, 0])[0])


def _radius(coeffs: PdeCoeffs, first):
    rho = coeffs.transform.eval(first)[0]
    return np.exp(rho) if coeffs.coords is CoordinateSystem.STRETCHED else rho


def test_function_coeffs(coeffs: PdeCoeffs, x1: float, offsets, orders, h: float, h_theta: float) -> np.ndarray:
    """Values ``gamma_{p, j}`` of the test functions at the stencil points.

    :param x1: first coordinate of the stencil center.
    :param offsets: ``(n, 2)`` offsets in units of ``(h, h_theta)``.
    :param orders: integer orders ``j``.
    :return: complex array of shape ``(n, len(orders))``; non-finite entries are set to zero.
    """
    offsets = np.asarray(offsets, dtype=float)
    orders = np.asarray(orders)
    radius = _radius(coeffs, x1 + offsets[:, 0] * h)
    r_star = coeffs.transform.physical_r_star
    kind = CylFunKind.BESSEL_J if x1 <= coeffs.first_star else CylFunKind.HANKEL1
    with np.errstate(all='ignore'):
        values = cylinder_function(kind, orders[None, :], coeffs.kappa * radius[:, None])
        if kind is CylFunKind.HANKEL1:
            values = values * (
                cylinder_function(CylFunKind.BESSEL_J, orders, coeffs.kappa * r_star) /
                cylinder_function(CylFunKind.HANKEL1, orders, coeffs.kappa * r_star)
            )[None, :]
        values = values * np.exp(1j * orders[None, :] * offsets[:, 1:2] * h_theta)
    return np.where(np.isfinite(values), values, 0.0)


def truncated_test_functions(evaluate, start: int, settings: PollutionSettings) -> tuple[np.ndarray, int]:
    """Grow the truncation ``J`` until the outermost band of orders is negligible.

    :param evaluate: callable mapping an array of orders onto the ``(n, len(orders))`` test values.
    :param start: initial truncation.
    :return: the test values for ``|j| <= J`` and ``J``.
    """
    truncation = min(start, settings.j_cap)
    while True:
        orders = np.arange(-truncation, truncation + 1)
        G = evaluate(orders)
        power = np.abs(G)**2
        diagonal = power.sum(axis=1).max()
        band = power[:, np.abs(orders) > truncation - J_STEP].sum(axis=1).max()
        if band <= settings.j_tol * diagonal:
            return G, truncation
        if truncation >= settings.j_cap:
            warnings.warn(
                f'Fourier truncation reached its cap J = {settings.j_cap} with band ratio {band / diagonal:.1e}',
                TruncationCapReached,
                stacklevel=2
            )
            return G, truncation
        truncation = min(truncation + J_STEP, settings.j_cap)


def gram(G: np.ndarray, delta: float, truncation: int = 0) -> GramSystem:
    """Return the Gram system of the test values ``G[p, j]`` shifted by ``delta``."""
    w = G.conj() @ G.T + delta * np.eye(len(G))
    return GramSystem(G, float(delta), w, truncation)


def objective(system: GramSystem, a) -> float:
    """``a^H w a``, the regularized pollution functional."""
    a = np.asarray(a)
    return float(np.real(a.conj() @ system.w @ a))


def minimize(system: GramSystem) -> tuple[np.ndarray, float]:
    """Minimize the functional under ``a_center = 1`` (the center is the first point).

    The normal equations are solved as the least squares problem
    ``[G_r; sqrt(delta) I] a_r = [-g_0; 0]``.

    :return: the coefficients and the objective at the minimizer.
    :raises SingularGram: if the reduced system is rank deficient.
    """
    transposed = system.G.T
    reduced = transposed[:, 1:]
    size = reduced.shape[1]
    if system.delta > 0:
        reduced = np.vstack([reduced, np.sqrt(system.delta) * np.eye(size)])
    rhs = np.zeros(reduced.shape[0], dtype=complex)
    rhs[:transposed.shape[0]] = -transposed[:, 0]
    try:
        solution, _, rank, _ = linalg.lstsq(reduced, rhs)
    except (linalg.LinAlgError, ValueError) as exception:
        raise SingularGram(f'the reduced Gram system could not be solved: {exception}') from exception
    if rank < size or not np.all(np.isfinite(solution)):
        raise SingularGram(f'the reduced Gram system has rank {rank} < {size}')
    coefficients = np.concatenate([[1.0], solution])
    return coefficients, objective(system, coefficients)


def delta_policy(boundary: bool, regular_region: bool, unregularized_objective: float,
                 settings: PollutionSettings = PollutionSettings()) -> float:
    """Regularization of a stencil.

    Zero for non-boundary stencils of the regular region, otherwise a fraction
    of the functional at the unregularized minimizer, bounded from below.
    """
    if regular_region and not boundary:
        return 0.0
    return max(settings.delta_factor * unregularized_objective, settings.delta_floor)


def generic_fallback_gate(kappa: float, local_h: float, boundary: bool = False,
                          settings: PollutionSettings = PollutionSettings()) -> bool:
    """``True`` when the order-condition stencil should replace the minimized one."""
    if boundary:
        return False
    return kappa * local_h < settings.fallback_kappa_h


@dataclasses.dataclass
class MinimizedStencil:
    coefficients: np.ndarray
    delta: float
    truncation: int
    objective: float
    smallest_eigenvalue: float | None = None


def minimize_with_policy(G: np.ndarray, truncation: int, *, boundary: bool, regular_region: bool,
                         settings: PollutionSettings) -> MinimizedStencil:
    """Minimize with the regularization of :func:`delta_policy`, raising it when the system is singular."""
    delta = 0.0
    if not (regular_region and not boundary):
        try:
            _, unregularized = minimize(gram(G, 0.0, truncation))
        except SingularGram:
            unregularized = 0.0
        delta = delta_policy(boundary, regular_region, unregularized, settings)
    for _ in range(8):
        system = gram(G, delta, truncation)
        try:
            coefficients, value = minimize(system)
        except SingularGram:
            delta = max(delta, settings.delta_floor) * 10
            LOGGER.debug(f'singular Gram system, raising delta to {delta:.1e}')
            continue
        smallest = system.smallest_eigenvalue
        LOGGER.debug(f'Gram system J={truncation} delta={delta:.1e} smallest eigenvalue {smallest:.2e}')
        return MinimizedStencil(coefficients, delta, truncation, value, smallest)
    raise SingularGram(f'the Gram system stayed singular up to delta = {delta:.1e}')


def minimized_stencil(coeffs: PdeCoeffs, x1: float, offsets, h: float, h_theta: float, *,
                      settings: PollutionSettings = PollutionSettings()) -> MinimizedStencil:
    """Pollution minimized coefficients of a mesh stencil centered at the first coordinate ``x1``.

    :param offsets: ``(n, 2)`` offsets in units of ``(h, h_theta)``, center first.
    """
    offsets = np.asarray(offsets)
    reach = np.abs(_radius(coeffs, x1 + offsets[:, 0] * h)).max()
    start = int(np.ceil(coeffs.kappa * reach)) + settings.j_margin
    G, truncation = truncated_test_functions(
        lambda orders: test_function_coeffs(coeffs, x1, offsets, orders, h, h_theta), start, settings
    )
    regular_region = x1 < coeffs.first_star and not np.isclose(x1, coeffs.first_star, rtol=1e-12, atol=0)
    return minimize_with_policy(G, truncation, boundary=False, regular_region=regular_region, settings=settings)
