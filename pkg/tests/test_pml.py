# -*- coding: utf-8 -*-
"""Tests for the complex layer transforms."""
import numpy as np
import pytest

from helmholtz_fd.exceptions import InvalidGeometry, InvalidParameter, OutOfDomain
from helmholtz_fd.pml import (
    ComplexTransform, TransformKind, auto_alpha1, auto_alpha2, build_transform, complex_radius, decay_budget
)

KINDS = (
    ComplexTransform(TransformKind.POLYNOMIAL_R, 2.0, 3.0, alpha=4.0, n=3),
    ComplexTransform(TransformKind.QUADRATIC_R, 2.0, 3.0, alpha1=5.0),
    ComplexTransform(TransformKind.LOG_R, 2.0, 3.0, alpha=1.5),
    ComplexTransform(TransformKind.RATIONAL_R, 2.0, 3.0, alpha1=1.0, alpha2=2.0),
    ComplexTransform(TransformKind.LINEAR_S, 0.5, 1.0, alpha2=1.0 + 2.0j),
)


@pytest.mark.parametrize('transform', KINDS, ids=lambda transform: transform.kind.value)
def test_identity_inside(transform):
    r = np.linspace(transform.r_star - 0.4, transform.r_star, 5)
    rho, drho, ddrho = transform.eval(r)
    np.testing.assert_allclose(rho, r)
    np.testing.assert_allclose(drho, 1.0)
    np.testing.assert_allclose(ddrho, 0.0)


@pytest.mark.parametrize('transform', KINDS, ids=lambda transform: transform.kind.value)
def test_jet_matches_eval(transform):
    r0 = transform.r_star + 0.3 * transform.thickness
    rho, drho, ddrho = transform.eval(r0)
    jet = transform.jet(r0, 4)
    np.testing.assert_allclose(jet.derivatives()[:3], [rho, drho, ddrho], rtol=1e-12)


@pytest.mark.parametrize('transform', KINDS, ids=lambda transform: transform.kind.value)
def test_derivative_by_differences(transform):
    r0 = transform.r_star + 0.5 * transform.thickness
    step = 1e-6
    rho_plus = transform.eval(r0 + step)[0]
    rho_minus = transform.eval(r0 - step)[0]
    assert (rho_plus - rho_minus) / (2 * step) == pytest.approx(transform.eval(r0)[1], rel=1e-6)


@pytest.mark.parametrize('transform', KINDS, ids=lambda transform: transform.kind.value)
def test_imaginary_part_grows_in_layer(transform):
    r = np.linspace(transform.r_star, transform.r_max, 20, endpoint=False)[1:]
    imaginary = transform.eval(r)[0].imag
    assert np.all(imaginary > 0)
    assert np.all(np.diff(imaginary) > 0)


def test_one_sided_interface():
    transform = KINDS[4]
    assert transform.eval(transform.r_star, side='left')[1] == 1.0
    assert transform.eval(transform.r_star, side='right')[1] == pytest.approx(1.0 + 2.0j)
    assert transform.beta == pytest.approx(1.0 + 2.0j)


def test_quadratic_has_no_jump():
    assert KINDS[1].beta == pytest.approx(1.0)


@pytest.mark.parametrize('index', (2, 3))
def test_singular_kinds_reject_outer_radius(index):
    with pytest.raises(OutOfDomain):
        KINDS[index].eval(3.0)


def test_beyond_outer_radius():
    with pytest.raises(OutOfDomain):
        KINDS[1].eval(3.5)


def test_invalid_radii():
    with pytest.raises(InvalidGeometry):
        ComplexTransform(TransformKind.QUADRATIC_R, 3.0, 2.0)
    with pytest.raises(InvalidGeometry):
        auto_alpha1(1.0, 2.0, 2.0)


def test_auto_alpha2_rejects_t():
    with pytest.raises(InvalidParameter):
        auto_alpha2(5.0, 0.0, 1.0, t=0.0)


def test_auto_alpha1_decay():
    """The automatic quadratic strength gives a decay factor of exp(-40)."""
    kappa, r_star, r_max = 5.0, 2.0, 3.0
    transform = build_transform('quadratic', kappa, r_star, r_max)
    z = transform.eval(r_max)[0]
    expected = np.exp(-kappa * transform.alpha1 * (r_max - r_star)**2 * np.sqrt(1 - r_star**2 / r_max**2))
    assert expected == pytest.approx(np.exp(-40.0))
    assert z.imag == pytest.approx(transform.alpha1 * (r_max - r_star)**2)


def test_build_stretched_transform():
    transform = build_transform('linear_s', 5.0, 2.0, 4.0)
    assert transform.kind is TransformKind.LINEAR_S
    assert transform.r_star == pytest.approx(np.log(2.0))
    assert transform.physical_r_max == pytest.approx(4.0)
    assert transform.alpha2.imag == pytest.approx(np.pi / 2 / np.log(2.0))


def test_complex_radius_stretched():
    transform = build_transform('linear_s', 5.0, 2.0, 4.0)
    assert complex_radius(transform, 1.5) == pytest.approx(1.5)
    outer = complex_radius(transform, 3.0)
    assert outer.imag > 0


def test_decay_budget():
    assert decay_budget(ComplexTransform(TransformKind.IDENTITY, 2.0, 3.0), 5.0) == 1.0
    assert decay_budget(build_transform('quadratic', 5.0, 2.0, 3.0), 5.0) < 1e-10
