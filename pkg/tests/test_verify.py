# -*- coding: utf-8 -*-
"""Tests for the series solutions, the error norms and the convergence orders."""
import numpy as np
import pytest

from helmholtz_fd.assembly import SolutionField
from helmholtz_fd.exceptions import AccuracyLoss, InvalidParameter, MeshMismatch
from helmholtz_fd.geometry import CircleScatterer, PolarCurveScatterer
from helmholtz_fd.mesh import build_regular_polar, build_stretched
from helmholtz_fd.pml import build_transform
from helmholtz_fd.problems import ModalSeries, PlaneWaveBump, PlaneWaveTrace, Problem
from helmholtz_fd.verify import (
    LatticeValues, SeriesSolution, convergence_order, convergence_table, decay_check, error_norms, exact_solution,
    fitted_order, pointwise_errors, pollution_reduction, series_eval
)

STEPS = [0.4, 0.2, 0.1]


def _smooth(mesh):
    return np.exp(1j * mesh.x) * np.cos(mesh.y)


def test_convergence_order():
    orders = convergence_order([(h, 3 * h**4) for h in STEPS])
    np.testing.assert_allclose(orders, [4.0, 4.0])
    assert fitted_order([(h, h**6) for h in STEPS]) == pytest.approx(6.0)


@pytest.mark.parametrize('errors', ([(0.1, 1e-3)], [(0.1, 1e-3), (0.2, 1e-4)], [(0.1, 1e-3), (0.1, 1e-4)]))
def test_convergence_order_rejects(errors):
    with pytest.raises(InvalidParameter):
        convergence_order(errors)


def test_pollution_reduction():
    assert pollution_reduction(0.25, 1.0) == pytest.approx(0.75)
    assert pollution_reduction(0.0, 0.0) == 0.0
    assert pollution_reduction(1.0, 0.0) == -np.inf


def test_convergence_table():
    rows = [{'n': 4 / h, 'h': h, 'err_linf': h**4, 'err_l2': 0.5 * h**6} for h in reversed(STEPS)]
    table = convergence_table(rows, generic=[2 * h**4 for h in reversed(STEPS)])
    assert [row['h'] for row in table] == STEPS
    assert table[0]['order_linf'] is None
    np.testing.assert_allclose([row['order_linf'] for row in table[1:]], [4.0, 4.0])
    np.testing.assert_allclose([row['order_l2'] for row in table[1:]], [6.0, 6.0])
    np.testing.assert_allclose([row['R'] for row in table], 0.5)


def test_convergence_table_skips_zero_errors():
    rows = [{'h': h, 'err_linf': 0.0, 'err_l2': 0.0} for h in STEPS]
    assert all(row['order_linf'] is None and row['R'] is None for row in convergence_table(rows))


def test_exact_solution_availability():
    circle = CircleScatterer(1.0)
    assert exact_solution(Problem(5.0, circle, None, ModalSeries())) is not None
    assert exact_solution(Problem(5.0, circle, None, PlaneWaveTrace(5.0))) is not None
    assert exact_solution(Problem(5.0, circle, PlaneWaveBump(5.0), ModalSeries())) is None
    assert exact_solution(Problem(5.0, PolarCurveScatterer(1.0, 0.3, 5), None, ModalSeries())) is None
    assert exact_solution(Problem(5.0, circle, None, ModalSeries()), center=(0.5, 0.0)) is None


def test_series_reproduces_boundary_data():
    data = ModalSeries()
    solution = exact_solution(Problem(5.0, CircleScatterer(1.0), None, data))
    theta = np.linspace(0, 2 * np.pi, 7)
    np.testing.assert_allclose(series_eval(solution, np.ones_like(theta), theta), data.value(np.cos(theta),
                                                                                              np.sin(theta)))


def test_short_series_warns():
    solution = SeriesSolution(np.arange(-3, 4), np.ones(7, dtype=complex), 1.0, 1.0)
    with pytest.warns(AccuracyLoss):
        series_eval(solution, np.array([1.5]), np.array([0.0]))


def test_decay_check_holds_for_modal_series():
    transform = build_transform('quadratic', 5.0, 2.0, 4.0)
    solution = exact_solution(Problem(5.0, CircleScatterer(1.0), None, ModalSeries()), transform)
    report = decay_check(solution, transform, 5.0)
    assert report.constant >= 1 - 1e-12
    assert not report.violated
    assert report.norms[-1] < report.norms[0]
    assert set(report.as_dict()) == {'radii', 'norms', 'bounds', 'constant', 'violated'}


def test_nested_meshes_share_nodes():
    coarse = build_stretched(5.0, 2.0, 4.0, 32, 1.0, snap_divisor=32)
    fine = build_stretched(5.0, 2.0, 4.0, 64, 1.0, snap_divisor=32)
    coarse_values = LatticeValues.from_field(SolutionField(_smooth(coarse), coarse))
    fine_values = LatticeValues.from_field(SolutionField(_smooth(fine), fine))
    assert coarse_values.scale_to(fine_values) == (2, 2)
    assert fine_values.scale_to(coarse_values) == (0, 0)
    errors, unmatched = pointwise_errors(coarse_values, fine_values)
    assert unmatched == 0
    compared = errors[np.isfinite(errors)]
    assert len(compared) == np.count_nonzero((coarse.i <= coarse.i_star) & ~coarse.dirichlet)
    assert compared.max() < 1e-12
    norms = error_norms(SolutionField(_smooth(coarse), coarse), SolutionField(_smooth(fine), fine))
    assert norms.linf < 1e-12
    assert norms.compared == len(compared)


def test_mismatched_lattices():
    stretched = build_stretched(5.0, 2.0, 4.0, 32, 1.0)
    regular = build_regular_polar(5.0, 2.0, 4.0, 32, 1.0)
    with pytest.raises(MeshMismatch):
        pointwise_errors(SolutionField(_smooth(stretched), stretched), SolutionField(_smooth(regular), regular))
