# -*- coding: utf-8 -*-
"""Integer-order Bessel and Hankel functions of complex argument.

Thin layer over :mod:`scipy.special` (AMOS) that fixes the conventions used by
the stencil construction: negative orders through the exact reflection
``F_{-j} = (-1)^j F_j``, derivatives through the three-term recurrence, and
errors mapped onto :mod:`helmholtz_fd.exceptions`.
"""
import enum
import warnings

import numpy as np
from scipy import special

from .exceptions import AccuracyLoss, DomainError, InvalidParameter, NonFinite

__all__ = (
    'CylFunKind', 'bessel_j', 'hankel1', 'bessel_j_deriv', 'hankel1_deriv', 'cylinder_function', 'MAX_DERIVATIVE'
)

MAX_DERIVATIVE = 8


class CylFunKind(enum.Enum):
    """Cylinder function family used for a test function."""

    BESSEL_J = 'bessel_j'
    HANKEL1 = 'hankel1'


def _prepare(order, z, *, allow_zero: bool):
    order = np.asarray(order)
    if order.dtype.kind not in 'iu':
        if not np.all(np.equal(np.mod(order, 1), 0)):
            raise InvalidParameter('cylinder functions are only provided for integer orders')
        order = order.astype(int)
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise NonFinite('cylinder function evaluated at a non-finite argument')
    if not allow_zero and np.any(z == 0):
        raise DomainError('the Hankel function is singular at z = 0')
    order, z = np.broadcast_arrays(order, z)
    return order, z


def _evaluate(func, order, z, *args):
    """Evaluate ``func(|order|, z, *args)`` and apply the reflection sign."""
    magnitude = np.abs(order)
    try:
        with special.errstate(loss='raise', no_result='raise'):
            values = func(magnitude, z, *args)
    except special.SpecialFunctionError as exception:
        warnings.warn(f'reduced accuracy in {func.__name__}: {exception}', AccuracyLoss, stacklevel=3)
        values = func(magnitude, z, *args)
    sign = np.where((order < 0) & (magnitude % 2 == 1), -1.0, 1.0)
    values = sign * values
    if values.ndim == 0:
        return complex(values)
    return values


def _check_deriv(deriv: int) -> int:
    deriv = int(deriv)
    if not 0 <= deriv <= MAX_DERIVATIVE:
        raise InvalidParameter(f'derivative order must lie in [0, {MAX_DERIVATIVE}], got {deriv}')
    return deriv


def bessel_j(order, z):
    """Return the Bessel function ``J_order(z)``.

    :param order: integer order, scalar or array.
    :param z: complex argument, scalar or array broadcastable against ``order``.
    :raises NonFinite: if ``z`` contains NaN or infinite entries.
    """
    order, z = _prepare(order, z, allow_zero=True)
    return _evaluate(special.jv, order, z)


def hankel1(order, z):
    """Return the Hankel function of the first kind ``H^(1)_order(z)``.

    :raises DomainError: if ``z`` vanishes.
    """
    order, z = _prepare(order, z, allow_zero=False)
    return _evaluate(special.hankel1, order, z)


def bessel_j_deriv(order, deriv: int, z):
    """Return the ``deriv``-th derivative of ``J_order`` at ``z``.

    Uses ``F'_j = (F_{j-1} - F_{j+1}) / 2``, the symmetric form of
    ``F'_j = F_{j-1} - (j / z) F_j``, applied ``deriv`` times.
    """
    deriv = _check_deriv(deriv)
    order, z = _prepare(order, z, allow_zero=True)
    return _evaluate(special.jvp, order, z, deriv)


def hankel1_deriv(order, deriv: int, z):
    """Return the ``deriv``-th derivative of ``H^(1)_order`` at ``z``."""
    deriv = _check_deriv(deriv)
    order, z = _prepare(order, z, allow_zero=False)
    return _evaluate(special.h1vp, order, z, deriv)


def cylinder_function(kind: CylFunKind, order, z, deriv: int = 0):
    """Dispatch to the Bessel or Hankel evaluation selected by ``kind``."""
    if kind is CylFunKind.BESSEL_J:
        return bessel_j_deriv(order, deriv, z) if deriv else bessel_j(order, z)
    return hankel1_deriv(order, deriv, z) if deriv else hankel1(order, z)
