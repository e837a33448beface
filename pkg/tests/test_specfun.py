# -*- coding: utf-8 -*-
"""Tests for the Bessel and Hankel layer."""
import numpy as np
import pytest

from helmholtz_fd.exceptions import DomainError, InvalidParameter, NonFinite
from helmholtz_fd.specfun import (
    MAX_DERIVATIVE, CylFunKind, bessel_j, bessel_j_deriv, cylinder_function, hankel1, hankel1_deriv
)


def test_bessel_at_origin():
    assert bessel_j(0, 0.0) == pytest.approx(1.0)
    assert bessel_j(3, 0.0) == pytest.approx(0.0)


def test_hankel_singular_at_origin():
    with pytest.raises(DomainError):
        hankel1(1, 0.0)


def test_non_finite_argument():
    with pytest.raises(NonFinite):
        bessel_j(1, np.nan)


def test_fractional_order_rejected():
    with pytest.raises(InvalidParameter):
        bessel_j(0.5, 1.0)


@pytest.mark.parametrize('deriv', (-1, MAX_DERIVATIVE + 1))
def test_derivative_range(deriv):
    with pytest.raises(InvalidParameter):
        hankel1_deriv(0, deriv, 1.0)


@pytest.mark.parametrize('function', (bessel_j, hankel1))
def test_negative_order_reflection(function):
    z = np.array([0.7 + 0.1j, 3.0, 12.5 + 2j])
    for order in range(1, 6):
        np.testing.assert_allclose(function(-order, z), (-1)**order * function(order, z), rtol=1e-13)


def test_first_derivative_recurrence():
    order = np.arange(-4, 5)
    z = 2.3 + 0.4j
    expected = (bessel_j(order - 1, z) - bessel_j(order + 1, z)) / 2
    np.testing.assert_allclose(bessel_j_deriv(order, 1, z), expected, rtol=1e-12)


def test_second_derivative_satisfies_bessel_equation():
    order, z = 3, 4.1 + 0.2j
    value = hankel1(order, z)
    first = hankel1_deriv(order, 1, z)
    second = hankel1_deriv(order, 2, z)
    assert abs(z**2 * second + z * first + (z**2 - order**2) * value) < 1e-10 * abs(z**2 * value)


def test_wronskian():
    order = np.arange(0, 30)
    z = np.linspace(0.5, 40.0, 30) + 0.5j
    wronskian = bessel_j(order, z) * hankel1_deriv(order, 1, z) - bessel_j_deriv(order, 1, z) * hankel1(order, z)
    np.testing.assert_allclose(wronskian, 2j / (np.pi * z), rtol=1e-9)


def test_cylinder_function_dispatch():
    z = np.array([1.0, 2.0])
    np.testing.assert_allclose(cylinder_function(CylFunKind.BESSEL_J, 2, z), bessel_j(2, z))
    np.testing.assert_allclose(cylinder_function(CylFunKind.HANKEL1, 2, z, deriv=1), hankel1_deriv(2, 1, z))


def test_broadcasting():
    values = hankel1(np.arange(3)[:, None], np.array([1.0, 2.0, 3.0, 4.0])[None, :])
    assert values.shape == (3, 4)
