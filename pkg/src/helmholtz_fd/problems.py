# -*- coding: utf-8 -*-
"""Registry of sources ``f`` and boundary data ``g`` with closed forms.

Sources expose :meth:`Source.jet`, the bivariate Taylor jet of ``f`` composed
with jets of the Cartesian coordinates, so the stencil right hand sides use
exact derivatives.
"""
from __future__ import annotations

import abc
import dataclasses

import numpy as np

from .exceptions import InvalidParameter
from .jets import Jet
from .specfun import bessel_j

__all__ = (
    'Source', 'PlaneWaveBump', 'BoundaryData', 'ZeroData', 'PlaneWaveTrace', 'ModalSeries', 'SOURCES',
    'BOUNDARY_DATA', 'make_source', 'make_boundary_data', 'Problem'
)

BUMP_CUTOFF = 1 - 1e-6
MODAL_MAX_ORDER = 60


class Source(abc.ABC):
    """Source term ``f`` of ``Laplace u + kappa^2 u = f``."""

    name: str = 'source'

    @abc.abstractmethod
    def jet(self, x: Jet, y: Jet) -> Jet:
        """Jet of ``f`` composed with the coordinate jets ``x`` and ``y``."""

    @property
    @abc.abstractmethod
    def support(self) -> tuple[tuple[float, float], float]:
        """Center and radius of a disk containing the support."""

    def value(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return self.jet(Jet.constant(x, 0, 2), Jet.constant(y, 0, 2)).value

    def vanishes_near(self, x, y, distance: float) -> bool:
        """``True`` if ``f`` is zero within ``distance`` of every point ``(x, y)``."""
        center, radius = self.support
        gap = np.hypot(np.asarray(x) - center[0], np.asarray(y) - center[1]) - radius
        return bool(np.all(gap >= distance))


@dataclasses.dataclass(frozen=True)
class PlaneWaveBump(Source):
    """``amplitude exp(i kappa (x - c) . e_phi) exp(r^2 / (r^2 - R^2))`` for ``r = |x - c| < R``."""

    kappa: float
    direction: float = np.pi / 3
    radius: float = 4.0
    center: tuple[float, float] = (0.0, 0.0)
    amplitude: float | None = None

    name = 'plane_wave_bump'

    @property
    def support(self):
        return self.center, self.radius

    def jet(self, x: Jet, y: Jet) -> Jet:
        dx = x - self.center[0]
        dy = y - self.center[1]
        squared = dx * dx + dy * dy
        inside = np.real(squared.value) < (self.radius * BUMP_CUTOFF)**2
        mask = inside.reshape(inside.shape + (1,) * squared.nvars)
        # outside the support the jet is replaced by a harmless constant before division
        safe = Jet(np.where(mask, squared.coefficients, 0.0), squared.order, squared.nvars)
        bump = (safe / (safe - self.radius**2)).exp()
        phase = (dx * np.cos(self.direction) + dy * np.sin(self.direction)) * (1j * self.kappa)
        amplitude = self.kappa if self.amplitude is None else self.amplitude
        value = phase.exp() * bump * amplitude
        return Jet(np.where(mask, value.coefficients, 0.0), value.order, value.nvars)


class BoundaryData(abc.ABC):
    """Dirichlet data ``g`` on the scatterer boundary."""

    name: str = 'boundary_data'

    @abc.abstractmethod
    def value(self, x, y) -> np.ndarray:
        """Values of ``g`` at boundary points."""

    def modes(self, radius: float, center=(0.0, 0.0)):
        """Fourier coefficients ``(orders, a_j)`` of ``g`` on the circle of ``radius`` around ``center``.

        ``None`` when no closed form is known.
        """
        return None


class ZeroData(BoundaryData):
    name = 'zero'

    def value(self, x, y):
        return np.zeros(np.shape(x), dtype=complex)

    def modes(self, radius, center=(0.0, 0.0)):
        return np.zeros(1, dtype=int), np.zeros(1, dtype=complex)


@dataclasses.dataclass(frozen=True)
class PlaneWaveTrace(BoundaryData):
    """``g = exp(i kappa (x cos phi + y sin phi))``."""

    kappa: float
    direction: float = 0.0

    name = 'plane_wave'

    def value(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return np.exp(1j * self.kappa * (x * np.cos(self.direction) + y * np.sin(self.direction)))

    def modes(self, radius, center=(0.0, 0.0)):
        if not np.allclose(center, 0.0):
            return None
        limit = int(np.ceil(self.kappa * radius)) + 40
        orders = np.arange(-limit, limit + 1)
        # Jacobi-Anger expansion of the plane wave on the circle
        coefficients = (1j**orders) * bessel_j(orders, self.kappa * radius) * np.exp(-1j * orders * self.direction)
        return orders, coefficients


@dataclasses.dataclass(frozen=True)
class ModalSeries(BoundaryData):
    """``g(theta) = sum_{|j| <= J} j^2 e^{-|j|} e^{i j (j + theta)}`` around ``center``."""

    max_order: int = MODAL_MAX_ORDER
    center: tuple[float, float] = (0.0, 0.0)

    name = 'modal_series'

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.max_order, self.max_order + 1)

    @property
    def coefficients(self) -> np.ndarray:
        j = self.orders
        return j**2 * np.exp(-np.abs(j)) * np.exp(1j * j**2)

    def value(self, x, y):
        theta = np.arctan2(np.asarray(y) - self.center[1], np.asarray(x) - self.center[0])
        return np.exp(1j * np.multiply.outer(theta, self.orders)) @ self.coefficients

    def modes(self, radius, center=(0.0, 0.0)):
        if not np.allclose(center, self.center):
            return None
        return self.orders, self.coefficients


def _plane_wave_bump(kappa, **params):
    return PlaneWaveBump(kappa, **params)


def _shifted_bump(kappa, **params):
    params = {'radius': 1.0, 'center': (1.5, 0.0), **params}
    return PlaneWaveBump(kappa, **params)


SOURCES = {
    'zero': lambda kappa, **params: None,
    'plane_wave_bump': _plane_wave_bump,
    'shifted_bump': _shifted_bump,
}

BOUNDARY_DATA = {
    'zero': lambda kappa, **params: ZeroData(),
    'plane_wave': lambda kappa, **params: PlaneWaveTrace(kappa, **params),
    'modal_series': lambda kappa, **params: ModalSeries(**params),
}


def make_source(name: str, kappa: float, **params) -> Source | None:
    """Instantiate a registered source, ``None`` for ``zero``."""
    try:
        factory = SOURCES[name]
    except KeyError:
        raise InvalidParameter(f'unknown source `{name}`, choose from {sorted(SOURCES)}') from None
    if 'center' in params:
        params['center'] = tuple(params['center'])
    return factory(kappa, **params)


def make_boundary_data(name: str, kappa: float, **params) -> BoundaryData:
    try:
        factory = BOUNDARY_DATA[name]
    except KeyError:
        raise InvalidParameter(f'unknown boundary data `{name}`, choose from {sorted(BOUNDARY_DATA)}') from None
    if 'center' in params:
        params['center'] = tuple(params['center'])
    return factory(kappa, **params)


@dataclasses.dataclass
class Problem:
    """Exterior Dirichlet problem ``Laplace u + kappa^2 u = f`` outside ``scatterer`` with ``u = g`` on its boundary."""

    kappa: float
    scatterer: object
    source: Source | None
    boundary_data: BoundaryData

    def __post_init__(self):
        if not self.kappa > 0:
            raise InvalidParameter(f'kappa must be positive, got {self.kappa}')
