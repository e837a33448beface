# -*- coding: utf-8 -*-
"""Coefficients of the transformed Helmholtz equation in normal form.

Both coordinate systems are written as::

    v_11 = a(x1) v_22 + b(x1) v_1 + kappa~(x1) v + f~(x1, x2)

with ``x1 = r`` (regular polar) or ``x1 = s = log r`` (stretched) and
``x2 = theta``. The physical equation is ``Laplace u + kappa^2 u = f``.
"""
from __future__ import annotations

import dataclasses

import numpy as np

from ..exceptions import InvalidParameter
from ..jets import Jet
from ..mesh import CoordinateSystem
from ..pml import ComplexTransform

__all__ = ('PdeCoeffs',)


@dataclasses.dataclass(frozen=True)
class PdeCoeffs:
    """Coefficient data ``a``, ``b``, ``kappa~``, ``f~`` and the interface factor ``beta``.

    :param source: Cartesian source with a ``jet(x, y)`` method returning the
        bivariate jet of ``f``, or ``None`` for ``f = 0``.
    """

    coords: CoordinateSystem
    kappa: float
    transform: ComplexTransform
    source: object | None = None
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.kappa <= 0:
            raise InvalidParameter(f'kappa must be positive, got {self.kappa}')
        if self.transform.kind.stretched != (self.coords is CoordinateSystem.STRETCHED):
            raise InvalidParameter(
                f'transform {self.transform.kind.value} does not match {self.coords.value} coordinates'
            )

    @property
    def beta(self) -> complex:
        return self.transform.beta

    @property
    def first_star(self) -> float:
        return self.transform.r_star

    def coefficient_jets(self, x1: float, order: int, side: str = 'left') -> tuple[Jet, Jet, Jet]:
        """Univariate jets of ``a``, ``b`` and ``kappa~`` of the given order around ``x1``."""
        rho = self.transform.jet(x1, order + 2, side=side)
        d1 = rho.differentiate()
        d2 = d1.differentiate()
        rho, d1 = rho.truncate(order), d1.truncate(order)
        d1_squared = d1 * d1
        if self.coords is CoordinateSystem.STRETCHED:
            a = -d1_squared
            b = d2 / d1
            kappa_tilde = d1_squared * (rho * 2).exp() * (-self.kappa**2)
        else:
            inverse = rho.reciprocal()
            a = -d1_squared * inverse * inverse
            b = d2 / d1 - d1 * inverse
            kappa_tilde = d1_squared * (-self.kappa**2)
        return a, b, kappa_tilde

    def derivatives(self, x1: float, order: int, side: str = 'left') -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Derivative values ``(a^(j), b^(j), kappa~^(j))`` for ``j = 0 .. order``."""
        return tuple(jet.derivatives() for jet in self.coefficient_jets(x1, order, side))

    def source_jet(self, x1, theta, order: int) -> Jet | None:
        """Bivariate jet of ``f~`` in ``(x1, theta)`` at the given points, ``None`` when ``f = 0``.

        The source is assumed to vanish in the layer, where ``f~`` is zero.
        """
        if self.source is None:
            return None
        x1 = np.asarray(x1, dtype=float)
        first = Jet.variable(x1, order, axis=0, nvars=2)
        angle = Jet.variable(np.asarray(theta, dtype=float), order, axis=1, nvars=2)
        radius = first.exp() if self.coords is CoordinateSystem.STRETCHED else first
        x = radius * angle.cos() + self.center[0]
        y = radius * angle.sin() + self.center[1]
        value = self.source.jet(x, y)
        if self.coords is CoordinateSystem.STRETCHED:
            value = value * (first * 2).exp()
        outside = (x1 > self.first_star).reshape(x1.shape + (1, 1))
        return Jet(np.where(outside, 0.0, value.coefficients), order, 2)
