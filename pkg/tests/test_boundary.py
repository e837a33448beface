# -*- coding: utf-8 -*-
"""Tests for the stencils of nodes next to a non-circular scatterer."""
import numpy as np
import pytest

from helmholtz_fd import boundary
from helmholtz_fd.exceptions import ConfigurationError, InsufficientStencil
from helmholtz_fd.geometry import CircleScatterer, PolarCurveScatterer
from helmholtz_fd.mesh import NodeClass, build_stretched
from helmholtz_fd.problems import PlaneWaveBump, PlaneWaveTrace


@pytest.fixture(scope='module')
def flower_mesh():
    return build_stretched(5.0, 2.5, 3.5, 64, PolarCurveScatterer(1.0, 0.3, 5))


def _disk_stencil_points(h=0.1):
    """Eight lattice points around ``(1.3, 0)`` and five points on the unit circle near ``(1, 0)``."""
    center = np.array([1.3, 0.0])
    grid = [center] + [center + h * np.array([a, b]) for a in (-1, 0, 1) for b in (-1, 0, 1) if (a, b) != (0, 0)]
    angles = (np.arange(5) - 2) * h
    circle = np.column_stack([np.cos(angles), np.sin(angles)])
    return center, np.array(grid[:8]), circle


def test_boundary_stencil_annihilates_plane_waves():
    """Minimized boundary stencils nearly annihilate local Helmholtz solutions."""
    kappa = 5.0
    center, grid, circle = _disk_stencil_points()
    minimized = boundary.boundary_stencil_coeffs(center, grid, circle, kappa)
    points = np.vstack([grid, circle])
    assert minimized.coefficients[0] == 1.0
    assert minimized.delta > 0
    for direction in (0.0, 1.0, 2.5):
        wave = PlaneWaveTrace(kappa, direction).value(points[:, 0], points[:, 1])
        residual = abs(minimized.coefficients @ wave)
        assert residual < 1e-2 * np.sum(np.abs(minimized.coefficients))


def test_boundary_stencil_needs_twelve_points():
    center, grid, circle = _disk_stencil_points()
    with pytest.raises(InsufficientStencil):
        boundary.boundary_stencil_coeffs(center, grid[:6], circle, 5.0)


def test_no_boundary_nodes_on_circle(stretched_mesh):
    assert boundary.detect_boundary_nodes(stretched_mesh) == {}
    assert boundary.build_boundary_stencils(stretched_mesh, 5.0) == {}


def test_boundary_points_follow_the_curve():
    flower = PolarCurveScatterer(1.0, 0.3, 5)
    base = flower.closest_point(1.5, 0.1)
    points = boundary.boundary_points(flower, base, 0.05)
    assert points.shape == (5, 2)
    radius = np.hypot(points[:, 0], points[:, 1])
    angle = np.arctan2(points[:, 1], points[:, 0])
    np.testing.assert_allclose(radius, 1.0 + 0.3 * np.sin(5 * angle), atol=1e-9)


def test_every_boundary_node_has_a_stencil(flower_mesh):
    stencils = boundary.build_boundary_stencils(flower_mesh, 5.0)
    near = np.nonzero(flower_mesh.node_class == NodeClass.NEAR_BOUNDARY)[0]
    assert sorted(stencils) == sorted(int(node) for node in near)
    for node, stencil in stencils.items():
        assert stencil.nodes[0] == node
        assert stencil.coefficients[0] == 1.0
        assert np.all(flower_mesh.node_class[stencil.nodes] != NodeClass.DIRICHLET_OUTER)
        if not stencil.slaved:
            assert len(stencil.nodes) + len(stencil.boundary) >= boundary.MIN_POINTS
            assert stencil.delta > 0


def test_boundary_load_uses_the_data(flower_mesh):
    stencils = boundary.build_boundary_stencils(flower_mesh, 5.0)
    stencil = next(stencil for stencil in stencils.values() if not stencil.slaved)
    data = PlaneWaveTrace(5.0)
    expected = -stencil.boundary_coefficients @ data.value(stencil.boundary[:, 0], stencil.boundary[:, 1])
    assert stencil.load(data) == pytest.approx(expected)
    entry = stencil.as_dict(flower_mesh)
    assert entry['mode'] == 'boundary'
    assert len(entry['boundary']) == boundary.BOUNDARY_POINTS


def test_source_clearance(flower_mesh):
    boundary.check_source_clearance(flower_mesh, None)
    boundary.check_source_clearance(flower_mesh, PlaneWaveBump(5.0, radius=0.3, center=(3.0, 0.0)))
    with pytest.raises(ConfigurationError):
        boundary.check_source_clearance(flower_mesh, PlaneWaveBump(5.0, radius=2.0))


def test_source_clearance_ignores_circles():
    mesh = build_stretched(5.0, 3.0, 4.0, 32, CircleScatterer(1.0))
    boundary.check_source_clearance(mesh, PlaneWaveBump(5.0, radius=2.0))
