# -*- coding: utf-8 -*-
"""Quick numerical checks of an installation.

Each check returns a :class:`CheckResult` with the measured value and its
tolerance; :func:`run_checks` runs a selection of them.
"""
from __future__ import annotations

import dataclasses
import typing as t

import numpy as np

from .config import config_from_preset
from .log import get_logger
from .mesh import CoordinateSystem
from .pml import ComplexTransform, TransformKind, auto_alpha2
from .specfun import bessel_j, bessel_j_deriv, hankel1, hankel1_deriv
from .stencils.footprints import ZEROTH_ORDER, Footprint, offsets
from .stencils.generic import reduce_taylor, solve_cpj
from .stencils.pde import PdeCoeffs
from .stencils.pollution import minimized_stencil

__all__ = ('CheckResult', 'CHECKS', 'run_checks')

LOGGER = get_logger(__name__)


@dataclasses.dataclass
class CheckResult:
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ''

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def _result(name: str, value: float, tolerance: float, detail: str = '', larger_is_better: bool = False):
    passed = bool(value >= tolerance) if larger_is_better else bool(value <= tolerance)
    return CheckResult(name, float(value), float(tolerance), passed, detail)


def _stretched_coeffs(kappa: float) -> PdeCoeffs:
    s_star, s_max = float(np.log(3.0)), float(np.log(4.0))
    transform = ComplexTransform(TransformKind.LINEAR_S, s_star, s_max, alpha2=auto_alpha2(kappa, s_star, s_max))
    return PdeCoeffs(CoordinateSystem.STRETCHED, kappa, transform)


def special_functions(samples: int = 1000, seed: int = 0) -> CheckResult:
    """Wronskian ``J H' - J' H = 2 i / (pi z)`` and the three-term recurrence at random ``(j, z)``."""
    rng = np.random.default_rng(seed)
    order = rng.integers(0, 40, samples)
    z = rng.uniform(0.5, 50.0, samples) + 1j * rng.uniform(0.0, 5.0, samples)

    j, h = bessel_j(order, z), hankel1(order, z)
    dj, dh = bessel_j_deriv(order, 1, z), hankel1_deriv(order, 1, z)
    wronskian = 2j / (np.pi * z)
    scale = np.maximum.reduce([np.abs(wronskian), np.abs(j * dh), np.abs(dj * h)])
    residual = np.abs(j * dh - dj * h - wronskian) / scale

    for function in (bessel_j, hankel1):
        lower, middle, upper = function(order - 1, z), function(order, z), function(order + 1, z)
        terms = np.abs(lower) + np.abs(upper) + np.abs(2 * order / z * middle)
        recurrence = np.abs(lower + upper - 2 * order / z * middle) / terms
        residual = np.maximum(residual, recurrence)
    return _result('special_functions', residual.max(), 1e-10, f'{samples} samples')


def plane_wave_identity(kappa: float = 20.0, r_star: float = 3.0, tolerance: float = 1e-17) -> CheckResult:
    """Jacobi-Anger identity ``exp(i kappa r cos theta) = sum_j i^j J_j(kappa r) e^{i j theta}``.

    The truncation grows until the tail vanishes.
    """
    r = np.linspace(1.0, r_star, 41)
    theta = np.linspace(0.0, 2 * np.pi, 64, endpoint=False)
    truncation = int(np.ceil(kappa * r_star)) + 10
    while np.abs(bessel_j(truncation, kappa * r_star)) > tolerance:
        truncation += 10
    orders = np.arange(-truncation, truncation + 1)
    modes = (1j**orders)[None, :] * bessel_j(orders[None, :], kappa * r[:, None])
    series = modes @ np.exp(1j * np.outer(orders, theta))
    exact = np.exp(1j * kappa * np.outer(r, np.cos(theta)))
    return _result('plane_wave_identity', np.abs(series - exact).max(), 1e-10, f'J = {truncation}')


def zeroth_order_patterns(order: int = 6) -> list[CheckResult]:
    """Leading coefficients of the generic stretched stencils against the tabulated Laplace patterns."""
    coeffs = _stretched_coeffs(1.0)
    results = []
    for footprint, pattern in ZEROTH_ORDER.items():
        points = offsets(footprint)
        reference = np.array([pattern.get(tuple(p), 0) for p in points], dtype=float)
        c, _ = solve_cpj(reduce_taylor(coeffs, 0.0, points, 0.01, order))
        leading = c[0] / c[0, 0]
        deviation = np.linalg.norm(leading - reference / reference[0])
        results.append(_result(f'zeroth_order_{footprint.value}', deviation, 1e-8))
    return results


def minimized_limit(kappa: float = 5.0, kappa_h: float = 0.2) -> list[CheckResult]:
    """Minimized interior stencils approach ``(-1, -4, 20) / 20`` as the mesh is refined."""
    coeffs = _stretched_coeffs(kappa)
    points = offsets(Footprint.INTERIOR)
    pattern = ZEROTH_ORDER[Footprint.INTERIOR]
    reference = np.array([pattern[tuple(p)] for p in points], dtype=float) / 20.0
    deviations = []
    for h in (kappa_h / kappa, kappa_h / kappa / 2):
        coefficients = minimized_stencil(coeffs, 0.0, points, h, h).coefficients
        deviations.append(float(np.linalg.norm(coefficients / coefficients[0] - reference)))
    LOGGER.debug(f'minimized stencil deviations {deviations}')
    return [
        _result('minimized_limit', deviations[0], 0.1, f'kappa h = {kappa_h}'),
        _result('minimized_limit_halving', deviations[1] - deviations[0], 0.0, f'{deviations[1]:.3e} after halving'),
    ]


def truncation_order(kappa: float = 2.0, mode: int = 3, order: int = 6) -> CheckResult:
    """Slope of the local truncation error of the generic interior stencil on an outgoing mode."""
    coeffs = _stretched_coeffs(kappa)
    points = offsets(Footprint.INTERIOR)
    steps = np.array([0.2, 0.1, 0.05])
    errors = []
    for h in steps:
        _, C = solve_cpj(reduce_taylor(coeffs, 0.0, points, h, order))
        values = hankel1(mode, kappa * np.exp(points[:, 0] * h)) * np.exp(1j * mode * points[:, 1] * h)
        errors.append(abs(C @ values))
    slope, _ = np.polyfit(np.log(steps), np.log(errors), 1)
    return _result('truncation_order', slope, order + 1.5, f'errors {errors}', larger_is_better=True)


def homogeneous_problem() -> CheckResult:
    """Zero source and zero boundary data give the zero field."""
    from .runner import solve_config

    result = solve_config(config_from_preset('homogeneous'), reference=False)
    return _result('homogeneous_problem', result.field.max_abs, 0.0, f'{result.system.size} unknowns')


CHECKS: dict[str, t.Callable] = {
    'special_functions': special_functions,
    'plane_wave_identity': plane_wave_identity,
    'zeroth_order_patterns': zeroth_order_patterns,
    'minimized_limit': minimized_limit,
    'truncation_order': truncation_order,
    'homogeneous_problem': homogeneous_problem,
}


def run_checks(names=None) -> list[CheckResult]:
    """Run the checks in ``names``, all of them by default."""
    results = []
    for name in names or CHECKS:
        outcome = CHECKS[name]()
        for result in outcome if isinstance(outcome, list) else [outcome]:
            level = 'info' if result.passed else 'warning'
            getattr(LOGGER, level)(f'{result.name}: {result.value:.3e} (tolerance {result.tolerance:.1e})')
            results.append(result)
    return results
