# -*- coding: utf-8 -*-
"""Truncated Taylor arithmetic in one or two variables.

A :class:`Jet` stores normalized Taylor coefficients ``c[..., i]`` (one
variable) or ``c[..., i, j]`` (two variables) of a function around a point,
with ``c[i, j] = d^{i+j} f / (dx^i dy^j) / (i! j!)`` and total degree at most
``order``. The leading axes broadcast like numpy arrays, so a single jet can
carry the expansions of many mesh nodes at once.

The PDE coefficients ``a``, ``b`` and ``kappa~`` are built as univariate jets of
the PML transform, the sources as bivariate jets of the Cartesian coordinates.
"""
from __future__ import annotations

from math import factorial

import numpy as np

__all__ = ('Jet',)


def _degree_mask(order: int, nvars: int) -> np.ndarray:
    if nvars == 1:
        return np.ones(order + 1, dtype=bool)
    index = np.arange(order + 1)
    return (index[:, None] + index[None, :]) <= order


class Jet:
    """Truncated Taylor expansion of total degree ``order`` in ``nvars`` variables."""

    # numpy defers to the reflected operators for ``array * jet``
    __array_ufunc__ = None

    def __init__(self, coefficients, order: int, nvars: int):
        if nvars not in (1, 2):
            raise ValueError('jets support one or two variables')
        self.order = int(order)
        self.nvars = nvars
        coefficients = np.asarray(coefficients, dtype=complex)
        expected = (self.order + 1,) * nvars
        if coefficients.shape[coefficients.ndim - nvars:] != expected:
            raise ValueError(f'coefficient trailing shape must be {expected}, got {coefficients.shape}')
        self.coefficients = coefficients * _degree_mask(self.order, nvars)

    # Constructors

    @classmethod
    def constant(cls, value, order: int, nvars: int = 1) -> Jet:
        value = np.asarray(value, dtype=complex)
        coefficients = np.zeros(value.shape + (order + 1,) * nvars, dtype=complex)
        coefficients[(...,) + (0,) * nvars] = value
        return cls(coefficients, order, nvars)

    @classmethod
    def variable(cls, value, order: int, axis: int = 0, nvars: int = 1) -> Jet:
        """Return the jet of the coordinate function ``x_axis`` around ``value``."""
        jet = cls.constant(value, order, nvars)
        if order >= 1:
            index = [0] * nvars
            index[axis] = 1
            jet.coefficients[(...,) + tuple(index)] = 1.0
        return jet

    @classmethod
    def from_derivatives(cls, derivatives, order: int) -> Jet:
        """Univariate jet from the derivative values ``f, f', ..., f^(order)`` along the last axis."""
        derivatives = np.asarray(derivatives, dtype=complex)[..., :order + 1]
        scale = np.array([1.0 / factorial(k) for k in range(order + 1)])
        return cls(derivatives * scale, order, 1)

    # Accessors

    @property
    def value(self) -> np.ndarray:
        return self.coefficients[(...,) + (0,) * self.nvars]

    @property
    def shape(self) -> tuple:
        return self.coefficients.shape[:self.coefficients.ndim - self.nvars]

    def derivative(self, *index: int):
        """Return the partial derivative of multi-index ``index`` at the expansion point."""
        if len(index) != self.nvars:
            raise ValueError(f'expected {self.nvars} indices, got {len(index)}')
        if sum(index) > self.order:
            raise ValueError(f'derivative {index} exceeds the jet order {self.order}')
        scale = 1
        for k in index:
            scale *= factorial(k)
        return self.coefficients[(...,) + tuple(index)] * scale

    def derivatives(self) -> np.ndarray:
        """Univariate jets only: all derivative values along the last axis."""
        if self.nvars != 1:
            raise ValueError('derivatives() is only defined for univariate jets')
        scale = np.array([float(factorial(k)) for k in range(self.order + 1)])
        return self.coefficients * scale

    def differentiate(self) -> Jet:
        """Univariate jets only: jet of ``f'`` with the order lowered by one."""
        if self.nvars != 1:
            raise ValueError('differentiate() is only defined for univariate jets')
        if self.order == 0:
            raise ValueError('cannot differentiate a jet of order zero')
        k = np.arange(1, self.order + 1)
        return Jet(self.coefficients[..., 1:] * k, self.order - 1, 1)

    def truncate(self, order: int) -> Jet:
        if order > self.order:
            raise ValueError('cannot raise the order of a jet')
        index = (Ellipsis,) + (slice(0, order + 1),) * self.nvars
        return Jet(self.coefficients[index], order, self.nvars)

    # Arithmetic

    def _coerce(self, other) -> Jet:
        if isinstance(other, Jet):
            if other.nvars != self.nvars:
                raise ValueError('cannot combine jets with different numbers of variables')
            if other.order != self.order:
                order = min(self.order, other.order)
                return other.truncate(order) if other.order > order else other
            return other
        return Jet.constant(other, self.order, self.nvars)

    def _align(self, other):
        other = self._coerce(other)
        this = self.truncate(other.order) if self.order > other.order else self
        return this, other

    def __add__(self, other) -> Jet:
        this, other = self._align(other)
        return Jet(this.coefficients + other.coefficients, this.order, this.nvars)

    __radd__ = __add__

    def __neg__(self) -> Jet:
        return Jet(-self.coefficients, self.order, self.nvars)

    def __sub__(self, other) -> Jet:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Jet:
        return (-self) + other

    def __mul__(self, other) -> Jet:
        if not isinstance(other, Jet):
            scalar = np.asarray(other, dtype=complex)
            scalar = scalar.reshape(scalar.shape + (1,) * self.nvars)
            return Jet(self.coefficients * scalar, self.order, self.nvars)
        this, other = self._align(other)
        return Jet(_product(this.coefficients, other.coefficients, this.order, this.nvars), this.order, this.nvars)

    __rmul__ = __mul__

    def __truediv__(self, other) -> Jet:
        if not isinstance(other, Jet):
            return self * (1.0 / np.asarray(other, dtype=complex))
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> Jet:
        return self.reciprocal() * other

    def __pow__(self, exponent: int) -> Jet:
        if int(exponent) != exponent or exponent < 0:
            raise ValueError('jets only support non-negative integer powers')
        result = Jet.constant(np.ones(self.shape), self.order, self.nvars)
        base = self
        exponent = int(exponent)
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # Elementary functions, all through f(c0 + delta) = sum_k f^(k)(c0) delta^k / k!

    def _split(self):
        """Return the constant part and the jet of the remainder."""
        c0 = self.value
        delta = self - c0
        return c0, delta

    def _series(self, derivatives_at_c0) -> Jet:
        """Compose the jet with a function given by its derivatives at the constant term."""
        _, delta = self._split()
        result = Jet.constant(derivatives_at_c0[0], self.order, self.nvars)
        power = Jet.constant(np.ones(self.shape), self.order, self.nvars)
        for k in range(1, self.order + 1):
            power = power * delta
            result = result + power * (derivatives_at_c0[k] / factorial(k))
        return result

    def reciprocal(self) -> Jet:
        c0 = self.value
        if np.any(c0 == 0):
            raise ZeroDivisionError('reciprocal of a jet with vanishing constant term')
        derivs = [((-1) ** k) * factorial(k) / c0 ** (k + 1) for k in range(self.order + 1)]
        return self._series(derivs)

    def exp(self) -> Jet:
        e0 = np.exp(self.value)
        return self._series([e0] * (self.order + 1))

    def log(self) -> Jet:
        c0 = self.value
        if np.any(c0 == 0):
            raise ZeroDivisionError('logarithm of a jet with vanishing constant term')
        derivs = [np.log(c0)] + [((-1) ** (k - 1)) * factorial(k - 1) / c0 ** k for k in range(1, self.order + 1)]
        return self._series(derivs)

    def sin(self) -> Jet:
        s0, c0 = np.sin(self.value), np.cos(self.value)
        cycle = [s0, c0, -s0, -c0]
        return self._series([cycle[k % 4] for k in range(self.order + 1)])

    def cos(self) -> Jet:
        s0, c0 = np.sin(self.value), np.cos(self.value)
        cycle = [c0, -s0, -c0, s0]
        return self._series([cycle[k % 4] for k in range(self.order + 1)])

    def sqrt(self) -> Jet:
        c0 = self.value
        derivs = []
        coefficient = 1.0
        for k in range(self.order + 1):
            derivs.append(coefficient * c0 ** (0.5 - k))
            coefficient *= 0.5 - k
        return self._series(derivs)

    def __repr__(self) -> str:
        return f'Jet(order={self.order}, nvars={self.nvars}, shape={self.shape})'


def _product(left: np.ndarray, right: np.ndarray, order: int, nvars: int) -> np.ndarray:
    """Truncated Cauchy product of two coefficient arrays."""
    shape = np.broadcast_shapes(left.shape, right.shape)
    result = np.zeros(shape, dtype=complex)
    if nvars == 1:
        for a in range(order + 1):
            result[..., a:] += left[..., a, None] * right[..., :order + 1 - a]
        return result
    for a1 in range(order + 1):
        for a2 in range(order + 1 - a1):
            factor = left[..., a1, a2, None, None]
            result[..., a1:, a2:] += factor * right[..., :order + 1 - a1, :order + 1 - a2]
    return result * _degree_mask(order, nvars)
