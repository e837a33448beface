# -*- coding: utf-8 -*-
"""Tests for the mesh builders and node classification."""
import numpy as np
import pytest

from helmholtz_fd.exceptions import ConfigurationError, GeometryError
from helmholtz_fd.geometry import PolarCurveScatterer
from helmholtz_fd.mesh import (
    CoordinateSystem, NodeClass, Refinement, RefinementMode, RefinementRegion, build_regular_polar, build_stretched,
    local_h, study_snap_divisor
)


def test_regular_polar_layout(regular_mesh):
    mesh = regular_mesh
    h = 2 * np.pi * 2.0 / 32
    assert mesh.coords is CoordinateSystem.REGULAR
    assert mesh.h == pytest.approx(h)
    assert (mesh.i_star, mesh.i_max) == (3, 8)
    assert mesh.size == 9 * 32
    assert mesh.r_star == pytest.approx(1.0 + 3 * h)
    assert mesh.r_max == pytest.approx(1.0 + 8 * h)
    assert np.all(mesh.node_class[mesh.i == 0] == NodeClass.DIRICHLET_SCATTERER)
    assert np.all(mesh.node_class[mesh.i == mesh.i_max] == NodeClass.DIRICHLET_OUTER)
    assert np.all(mesh.node_class[mesh.i == mesh.i_star] == NodeClass.INTERFACE)
    assert mesh.stats()['unknowns'] == 7 * 32


def test_regular_polar_rejects_small_n():
    with pytest.raises(ConfigurationError):
        build_regular_polar(5.0, 2.0, 4.0, 4, 1.0)


def test_regular_polar_rejects_large_scatterer():
    with pytest.raises(GeometryError):
        build_regular_polar(5.0, 2.0, 4.0, 32, 2.5)


def test_snap_divisor_must_divide_n():
    with pytest.raises(ConfigurationError):
        build_regular_polar(5.0, 2.0, 4.0, 32, 1.0, snap_divisor=12)


@pytest.mark.parametrize('builder', (build_regular_polar, build_stretched))
def test_snapped_radii_are_shared(builder):
    coarse = builder(5.0, 2.0, 4.0, 32, 1.0, snap_divisor=32)
    fine = builder(5.0, 2.0, 4.0, 64, 1.0, snap_divisor=32)
    assert fine.r_star == pytest.approx(coarse.r_star)
    assert fine.r_max == pytest.approx(coarse.r_max)
    assert coarse.lattice_scale(fine) == 2


def test_study_snap_divisor():
    assert study_snap_divisor([288, 384, 576, 768, 1152, 2304]) == 96
    assert study_snap_divisor([32, 48, 64]) == 16


def test_lookup_and_neighbors(regular_mesh):
    mesh = regular_mesh
    nodes = np.arange(mesh.size)
    np.testing.assert_array_equal(mesh.lookup(mesh.i, mesh.k), nodes)
    assert mesh.lookup(mesh.i_max + 1, 0) == -1
    node = int(mesh.lookup(2, 31))
    neighbors = mesh.neighbors([node], [(0, 1), (1, 0), (-1, 0)])[0]
    np.testing.assert_array_equal(mesh.i[neighbors], [2, 3, 1])
    np.testing.assert_array_equal(mesh.k[neighbors], [0, 31, 31])


def test_region_sign(regular_mesh):
    region = regular_mesh.region()
    assert set(np.unique(region)) == {-1, 0, 1}
    assert np.all(region[regular_mesh.i == regular_mesh.i_star] == 0)


def test_stretched_layout(stretched_mesh):
    mesh = stretched_mesh
    unit = 2 * np.pi / 32
    assert mesh.coords is CoordinateSystem.STRETCHED
    assert mesh.unit == pytest.approx(unit)
    assert mesh.gamma == pytest.approx(1.0)
    assert mesh.r_star == pytest.approx(np.exp(mesh.i_star * unit))
    assert mesh.levels == 0
    assert np.all(mesh.local_h == 1)
    assert local_h(mesh, 0) == pytest.approx(unit)
    counts = mesh.stats()['classes']
    assert counts['dangling_s'] == counts['dangling_theta'] == counts['auxiliary'] == 0
    assert counts['interface'] == 32


def test_stretched_uniform_refinement():
    mesh = build_stretched(5.0, 3.0, 4.0, 64, 1.0, Refinement(RefinementMode.UNIFORM))
    assert mesh.levels == 1
    assert set(np.unique(mesh.local_h)) == {1, 2}
    classes = set(NodeClass(int(value)) for value in np.unique(mesh.node_class))
    assert NodeClass.NEAR_BOUNDARY not in classes
    assert classes & {NodeClass.DANGLING_S, NodeClass.DANGLING_THETA, NodeClass.AUXILIARY}
    # the scatterer rows are coarse, the interface rows fine
    assert np.all(mesh.local_h[mesh.i <= 4] == 2)
    assert np.all(mesh.i[mesh.i <= 4] % 2 == 0)
    assert np.all(mesh.local_h[mesh.i == mesh.i_star] == 1)


def test_adaptive_region_adds_levels():
    region = RefinementRegion(r_max=1.5, level_offset=1)
    mesh = build_stretched(5.0, 3.0, 4.0, 64, 1.0, Refinement(RefinementMode.ADAPTIVE, (region,)))
    assert mesh.extra_levels == 1
    assert mesh.n_theta == 128
    assert mesh.h == pytest.approx(2 * np.pi * 3.0 / 64)


def test_non_circular_scatterer_has_boundary_nodes():
    flower = PolarCurveScatterer(1.0, 0.3, 5)
    mesh = build_stretched(5.0, 2.5, 3.5, 64, flower)
    near = mesh.node_class == NodeClass.NEAR_BOUNDARY
    assert np.any(near)
    assert not np.any(mesh.node_class == NodeClass.DIRICHLET_SCATTERER)
    assert not np.any(flower.contains(mesh.x, mesh.y))


def test_scatterer_beyond_r_star():
    with pytest.raises(GeometryError):
        build_stretched(5.0, 1.2, 2.0, 32, PolarCurveScatterer(1.0, 0.3, 5))
