# -*- coding: utf-8 -*-
"""Tests for the truncated Taylor arithmetic."""
from math import factorial

import numpy as np
import pytest

from helmholtz_fd.jets import Jet


def test_variable_and_constant():
    x = Jet.variable(2.0, 4)
    assert x.value == 2.0
    np.testing.assert_allclose(x.derivatives(), [2.0, 1.0, 0.0, 0.0, 0.0])
    c = Jet.constant(3.0, 4)
    np.testing.assert_allclose(c.derivatives(), [3.0, 0.0, 0.0, 0.0, 0.0])


def test_product_rule():
    x = Jet.variable(1.5, 5)
    np.testing.assert_allclose((x * x * x).derivatives()[:4], [1.5**3, 3 * 1.5**2, 6 * 1.5, 6.0])


def test_power_matches_repeated_product():
    x = Jet.variable(0.3, 6)
    np.testing.assert_allclose((x**4).coefficients, (x * x * x * x).coefficients)


@pytest.mark.parametrize('name, reference', (
    ('exp', lambda x0, k: np.exp(x0)),
    ('sin', lambda x0, k: np.sin(x0 + k * np.pi / 2)),
    ('cos', lambda x0, k: np.cos(x0 + k * np.pi / 2)),
))
def test_elementary_functions(name, reference):
    x0 = 0.7
    jet = getattr(Jet.variable(x0, 6), name)()
    expected = [reference(x0, k) for k in range(7)]
    np.testing.assert_allclose(jet.derivatives(), expected, rtol=1e-12)


def test_log_and_reciprocal():
    x0 = 1.7
    x = Jet.variable(x0, 5)
    logs = x.log().derivatives()
    assert logs[0] == pytest.approx(np.log(x0))
    for k in range(1, 6):
        assert logs[k] == pytest.approx((-1)**(k - 1) * factorial(k - 1) / x0**k)
    np.testing.assert_allclose((x * x.reciprocal()).derivatives(), [1, 0, 0, 0, 0, 0], atol=1e-12)


def test_sqrt_squares_back():
    x = Jet.variable(2.5, 5)
    root = x.sqrt()
    np.testing.assert_allclose((root * root).coefficients, x.coefficients, atol=1e-12)


def test_reciprocal_of_zero():
    with pytest.raises(ZeroDivisionError):
        Jet.variable(0.0, 3).reciprocal()


def test_differentiate_lowers_order():
    x = Jet.variable(2.0, 4)
    derivative = (x * x * x).differentiate()
    assert derivative.order == 3
    np.testing.assert_allclose(derivative.derivatives(), [12.0, 12.0, 6.0, 0.0])


def test_bivariate_mixed_derivative():
    x = Jet.variable(1.0, 4, axis=0, nvars=2)
    y = Jet.variable(2.0, 4, axis=1, nvars=2)
    product = x * x * y
    assert product.derivative(0, 0) == pytest.approx(2.0)
    assert product.derivative(2, 1) == pytest.approx(2.0)
    assert product.derivative(1, 1) == pytest.approx(2.0)
    assert product.derivative(0, 1) == pytest.approx(1.0)


def test_total_degree_truncation():
    x = Jet.variable(0.0, 2, axis=0, nvars=2)
    y = Jet.variable(0.0, 2, axis=1, nvars=2)
    assert (x * x * y).derivative(1, 1) == 0
    with pytest.raises(ValueError):
        (x * y).derivative(2, 1)


def test_broadcast_leading_axes():
    x = Jet.variable(np.array([0.1, 0.2, 0.3]), 3)
    assert x.shape == (3,)
    np.testing.assert_allclose(x.exp().value, np.exp([0.1, 0.2, 0.3]))


def test_array_times_jet():
    x = Jet.variable(np.array([1.0, 2.0]), 2)
    scaled = np.array([2.0, 3.0]) * x
    assert isinstance(scaled, Jet)
    np.testing.assert_allclose(scaled.value, [2.0, 6.0])


def test_mismatched_variables():
    with pytest.raises(ValueError):
        Jet.variable(0.0, 2) + Jet.variable(0.0, 2, nvars=2)
