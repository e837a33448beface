# -*- coding: utf-8 -*-
"""Tests for the scatterer geometries."""
import numpy as np
import pytest

from helmholtz_fd.exceptions import GeometryError
from helmholtz_fd.geometry import (
    CircleScatterer, DiskUnionScatterer, ImplicitQuarticScatterer, PolarCurveScatterer, PolylineScatterer
)

SQUARE = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0)]


def test_circle_contains():
    circle = CircleScatterer(1.0, (0.5, 0.0))
    assert circle.is_circle
    np.testing.assert_array_equal(circle.contains(np.array([0.5, 1.4, 1.6]), np.zeros(3)), [True, True, False])


def test_circle_closest_point():
    closest = CircleScatterer(1.0).closest_point(2.0, 0.0)
    assert closest.distance == pytest.approx(1.0, abs=1e-10)
    assert (closest.x, closest.y) == pytest.approx((1.0, 0.0), abs=1e-8)


def test_invalid_circle():
    with pytest.raises(GeometryError):
        CircleScatterer(0.0)


def test_polar_curve_closest_point_lies_on_curve():
    flower = PolarCurveScatterer(1.0, 0.5, 8)
    closest = flower.closest_point(2.0, 0.3)
    radius = np.hypot(closest.x, closest.y)
    angle = np.arctan2(closest.y, closest.x)
    assert radius == pytest.approx(1.0 + 0.5 * np.sin(8 * angle), abs=1e-9)
    assert closest.distance == pytest.approx(np.hypot(2.0 - closest.x, 0.3 - closest.y))


def test_polar_curve_radius_range():
    inner, outer = PolarCurveScatterer(1.0, 0.5, 8).boundary_radius_range()
    assert inner == pytest.approx(0.5, abs=1e-4)
    assert outer == pytest.approx(1.5, abs=1e-4)


def test_polar_curve_must_stay_positive():
    with pytest.raises(GeometryError):
        PolarCurveScatterer(1.0, 1.2, 4)


def test_boundary_points_spacing():
    flower = PolarCurveScatterer(1.0, 0.3, 5)
    closest = flower.closest_point(1.8, 0.2)
    x, y = flower.boundary_points(closest, 0.01, 5)
    gaps = np.hypot(np.diff(x), np.diff(y))
    np.testing.assert_allclose(gaps, 0.01, rtol=0.15)
    assert (x[2], y[2]) == pytest.approx((closest.x, closest.y))


def test_inner_radius_of_circle():
    assert CircleScatterer(1.0).inner_radius() == pytest.approx(0.9, rel=1e-3)


def test_disk_union():
    disks = DiskUnionScatterer([(0.0, 0.0), (0.8, 0.0)], 0.5)
    np.testing.assert_array_equal(disks.contains(np.array([0.0, 0.8, 0.4, 0.0]), np.array([0.0, 0.0, 0.0, 0.6])),
                                  [True, True, True, False])


def test_disk_union_closest_point_skips_hidden_arcs():
    """The closest boundary point of a point between two overlapping disks is not inside the other disk."""
    disks = DiskUnionScatterer([(0.0, 0.0), (0.8, 0.0)], 0.5)
    closest = disks.closest_point(0.4, 0.6)
    assert closest.distance == pytest.approx(np.hypot(0.4, 0.6) - 0.5, abs=1e-8)
    for center in disks.centers:
        assert np.hypot(closest.x - center[0], closest.y - center[1]) >= 0.5 * (1 - 1e-9)


def test_quartic_lobes():
    peanut = ImplicitQuarticScatterer(1.0, 0.6)
    assert len(peanut.components) == 2
    np.testing.assert_array_equal(peanut.contains(np.array([0.0, 0.0]), np.array([1.0, 0.0])), [True, False])


def test_quartic_center_must_be_inside():
    peanut = ImplicitQuarticScatterer(1.0, 0.6)
    with pytest.raises(GeometryError):
        peanut.inner_radius((0.0, 0.0))
    assert 0 < peanut.inner_radius((0.0, 1.0)) < 0.6


def test_polyline():
    square = PolylineScatterer(SQUARE)
    np.testing.assert_array_equal(square.contains(np.array([0.0, 3.0]), np.array([0.0, 0.0])), [True, False])


def test_polyline_needs_four_vertices():
    with pytest.raises(GeometryError):
        PolylineScatterer([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])
