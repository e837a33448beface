# -*- coding: utf-8 -*-
"""Complex coordinate transforms of the perfectly matched layer.

A :class:`ComplexTransform` maps the radial coordinate of the layer
``(r_star, r_max)`` to the complex plane and is the identity up to ``r_star``.
For the stretched kind ``LINEAR_S`` the radii are read as ``s = log r``.
"""
from __future__ import annotations

import dataclasses
import enum

import numpy as np

from .exceptions import InvalidGeometry, InvalidParameter, OutOfDomain
from .jets import Jet

__all__ = (
    'TransformKind', 'ComplexTransform', 'auto_alpha1', 'auto_alpha2', 'decay_budget', 'complex_radius',
    'build_transform'
)

DECAY_NUMERATOR = 40.0


class TransformKind(enum.Enum):
    IDENTITY = 'identity'
    POLYNOMIAL_R = 'polynomial'
    QUADRATIC_R = 'quadratic'
    LOG_R = 'log'
    RATIONAL_R = 'rational'
    LINEAR_S = 'linear_s'

    @property
    def singular(self) -> bool:
        return self in (TransformKind.LOG_R, TransformKind.RATIONAL_R)

    @property
    def stretched(self) -> bool:
        return self is TransformKind.LINEAR_S


@dataclasses.dataclass(frozen=True)
class ComplexTransform:
    """PML map rho with its parameters.

    ``alpha`` is the strength of the polynomial and log kinds, ``alpha1`` the
    strength of the quadratic kind (and the real part of the rational kind),
    ``alpha2`` the complex slope of the linear kind (its imaginary part for the
    rational kind).
    """

    kind: TransformKind
    r_star: float
    r_max: float
    alpha: float = 0.0
    alpha1: float = 0.0
    alpha2: complex = 0.0
    n: int = 2

    def __post_init__(self):
        if not self.r_max > self.r_star:
            raise InvalidGeometry(f'r_max = {self.r_max} must exceed r_star = {self.r_star}')
        if not self.kind.stretched and self.r_star <= 0:
            raise InvalidGeometry(f'r_star = {self.r_star} must be positive')
        if self.kind is TransformKind.POLYNOMIAL_R and self.n < 1:
            raise InvalidParameter(f'polynomial exponent must be at least 1, got {self.n}')

    @property
    def thickness(self) -> float:
        return self.r_max - self.r_star

    @property
    def physical_r_star(self) -> float:
        return float(np.exp(self.r_star)) if self.kind.stretched else self.r_star

    @property
    def physical_r_max(self) -> float:
        return float(np.exp(self.r_max)) if self.kind.stretched else self.r_max

    @property
    def beta(self) -> complex:
        """Interface jump factor ``rho'(r_star+)``."""
        return complex(self.eval(self.r_star, side='right')[1])

    def _check_domain(self, r: np.ndarray):
        if not self.kind.stretched and np.any(r <= 0):
            raise OutOfDomain('radial coordinate must be positive')
        if self.kind.singular and np.any(r >= self.r_max):
            raise OutOfDomain(f'{self.kind.value} transform is singular at r_max = {self.r_max}')
        if np.any(r > self.r_max):
            raise OutOfDomain(f'coordinate beyond the outer PML radius {self.r_max}')

    def eval(self, r, side: str = 'left'):
        """Return ``(rho, rho', rho'')`` at ``r``.

        At ``r == r_star`` the ``left`` side is the identity and the ``right``
        side uses the layer formula.
        """
        r = np.asarray(r, dtype=float)
        self._check_domain(r)
        inside = (r > self.r_star) | ((r == self.r_star) & (side == 'right'))
        rho = r.astype(complex)
        drho = np.ones_like(rho)
        ddrho = np.zeros_like(rho)
        if self.kind is not TransformKind.IDENTITY and np.any(inside):
            values = self._layer(r[inside])
            rho[inside], drho[inside], ddrho[inside] = values
        if rho.ndim == 0:
            return complex(rho), complex(drho), complex(ddrho)
        return rho, drho, ddrho

    def _layer(self, r: np.ndarray):
        d = self.thickness
        match self.kind:
            case TransformKind.POLYNOMIAL_R:
                x = (r - self.r_star) / d
                n = self.n
                rho = r + 1j * self.alpha * x**n
                drho = 1 + 1j * self.alpha * n * x**(n - 1) / d
                ddrho = 1j * self.alpha * n * (n - 1) * x**max(n - 2, 0) / d**2
            case TransformKind.QUADRATIC_R:
                t = r - self.r_star
                rho = r + 1j * self.alpha1 * t**2
                drho = 1 + 2j * self.alpha1 * t
                ddrho = np.full_like(t, 2j * self.alpha1, dtype=complex)
            case TransformKind.LOG_R:
                gap = self.r_max - r
                rho = r + 1j * self.alpha * np.log(d / gap)
                drho = 1 + 1j * self.alpha / gap
                ddrho = 1j * self.alpha / gap**2
            case TransformKind.RATIONAL_R:
                gap = self.r_max - r
                strength = self.alpha1 + 1j * self.alpha2.real
                rho = self.r_star + strength * (r - self.r_star) / gap
                drho = strength * d / gap**2
                ddrho = 2 * strength * d / gap**3
            case TransformKind.LINEAR_S:
                rho = self.r_star + self.alpha2 * (r - self.r_star)
                drho = np.full_like(r, self.alpha2, dtype=complex)
                ddrho = np.zeros_like(r, dtype=complex)
            case _:
                rho, drho, ddrho = r.astype(complex), np.ones_like(r, dtype=complex), np.zeros_like(r, dtype=complex)
        return rho, drho, ddrho

    def jet(self, r0: float, order: int, side: str = 'left') -> Jet:
        """Univariate Taylor jet of ``rho`` around ``r0``, one-sided at ``r_star``."""
        self._check_domain(np.asarray(r0))
        r = Jet.variable(r0, order)
        if self.kind is TransformKind.IDENTITY or r0 < self.r_star or (r0 == self.r_star and side == 'left'):
            return r
        d = self.thickness
        match self.kind:
            case TransformKind.POLYNOMIAL_R:
                return r + ((r - self.r_star) * (1 / d))**self.n * (1j * self.alpha)
            case TransformKind.QUADRATIC_R:
                return r + (r - self.r_star)**2 * (1j * self.alpha1)
            case TransformKind.LOG_R:
                return r + ((self.r_max - r).log() * -1 + np.log(d)) * (1j * self.alpha)
            case TransformKind.RATIONAL_R:
                strength = self.alpha1 + 1j * self.alpha2.real
                return (r - self.r_star) * (self.r_max - r).reciprocal() * strength + self.r_star
            case TransformKind.LINEAR_S:
                return (r - self.r_star) * self.alpha2 + self.r_star
        raise InvalidParameter(f'unsupported transform kind {self.kind}')


def auto_alpha1(kappa: float, r_star: float, r_max: float) -> float:
    """Quadratic strength giving a decay factor near ``exp(-40)``."""
    if not r_max > r_star:
        raise InvalidGeometry(f'r_max = {r_max} must exceed r_star = {r_star}')
    d = r_max - r_star
    return DECAY_NUMERATOR / (kappa * d**2 * np.sqrt(1 - r_star**2 / r_max**2))


def auto_alpha2(kappa: float, s_star: float, s_max: float, t: float = 1.0) -> complex:
    """Complex slope of the stretched linear layer.

    :param t: tunable parameter in ``(0, 1]``, the sine of the rotation of the layer.
    """
    if not 0 < t <= 1:
        raise InvalidParameter(f't must lie in (0, 1], got {t}')
    if not s_max > s_star:
        raise InvalidGeometry(f's_max = {s_max} must exceed s_star = {s_star}')
    real = 0.5 / t * np.log(1 + (DECAY_NUMERATOR / kappa * np.exp(-s_star))**2)
    return complex(real, np.arcsin(t)) / (s_max - s_star)


def complex_radius(transform: ComplexTransform, r, side: str = 'left'):
    """Complex radius seen by the outgoing waves at the physical radius ``r``."""
    r = np.asarray(r, dtype=float)
    if transform.kind.stretched:
        return np.exp(transform.eval(np.log(r), side=side)[0])
    return transform.eval(r, side=side)[0]


def decay_budget(transform: ComplexTransform, kappa: float) -> float:
    """Return ``exp(-kappa Im z sqrt(1 - r_star^2 / |z|^2))`` at the outer edge of the layer."""
    if transform.kind is TransformKind.IDENTITY:
        return 1.0
    edge = transform.r_max
    if transform.kind.singular:
        edge = transform.r_max - 1e-9 * transform.thickness
    rho = transform.eval(edge)[0]
    z = np.exp(rho) if transform.kind.stretched else rho
    r_star = transform.physical_r_star
    factor = np.sqrt(1 - r_star**2 / abs(z)**2 + 0j)
    return float(np.exp(-kappa * z.imag * factor.real))


def build_transform(
    kind: str | TransformKind,
    kappa: float,
    r_star: float,
    r_max: float,
    *,
    t: float = 1.0,
    alpha: float | None = None,
    alpha1: float | None = None,
    alpha2: complex | None = None,
    n: int = 2,
) -> ComplexTransform:
    """Build a transform on the physical radii ``r_star < r_max``, filling unset strengths automatically.

    Strengths of the log and rational kinds have no automatic choice and must be given.
    """
    kind = TransformKind(kind)
    if not r_max > r_star:
        raise InvalidGeometry(f'r_max = {r_max} must exceed r_star = {r_star}')
    match kind:
        case TransformKind.LINEAR_S:
            s_star, s_max = float(np.log(r_star)), float(np.log(r_max))
            slope = auto_alpha2(kappa, s_star, s_max, t) if alpha2 is None else complex(alpha2)
            return ComplexTransform(kind, s_star, s_max, alpha2=slope)
        case TransformKind.QUADRATIC_R:
            strength = auto_alpha1(kappa, r_star, r_max) if alpha1 is None else alpha1
            return ComplexTransform(kind, r_star, r_max, alpha1=strength)
        case TransformKind.POLYNOMIAL_R:
            if alpha is None:
                alpha = auto_alpha1(kappa, r_star, r_max) * (r_max - r_star)**2
            return ComplexTransform(kind, r_star, r_max, alpha=alpha, n=n)
        case TransformKind.LOG_R:
            if alpha is None:
                raise InvalidParameter('the log transform needs an explicit alpha')
            return ComplexTransform(kind, r_star, r_max, alpha=alpha)
        case TransformKind.RATIONAL_R:
            if alpha1 is None or alpha2 is None:
                raise InvalidParameter('the rational transform needs explicit alpha1 and alpha2')
            return ComplexTransform(kind, r_star, r_max, alpha1=alpha1, alpha2=complex(alpha2))
    return ComplexTransform(TransformKind.IDENTITY, r_star, r_max)
