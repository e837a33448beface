# -*- coding: utf-8 -*-
"""Run experiments described by an :class:`~helmholtz_fd.config.ExperimentConfig`.

A run builds the mesh and the layer transform, computes the stencils, solves
the global system and compares the field with the configured reference.
Studies repeat runs over lists of mesh sizes, wavenumbers and layer widths.
"""
from __future__ import annotations

import dataclasses
from math import gcd
import pathlib
import time
import warnings

import numpy as np

from . import __version__, artifacts
from .assembly import LinearSystem, SolutionField, assemble, solve
from .boundary import build_boundary_stencils, check_source_clearance
from .config import ExperimentConfig, dump_config
from .exceptions import ConfigurationError, HelmholtzWarning, MeshMismatch
from .log import get_logger
from .mesh import CoordinateSystem, Mesh, build_regular_polar, build_stretched, study_snap_divisor
from .pml import ComplexTransform, TransformKind, auto_alpha2, build_transform
from .problems import Problem
from .stencils.book import StencilBook
from .stencils.pde import PdeCoeffs
from .verify import (
    ErrorNorms, LatticeValues, SeriesSolution, convergence_order, convergence_table, decay_check, exact_solution,
    pointwise_errors
)

__all__ = (
    'RunResult', 'build_mesh', 'transform_for_mesh', 'solve_config', 'run', 'convergence_study', 'pml_sweep',
    'sweep_cell_config'
)

LOGGER = get_logger(__name__)


@dataclasses.dataclass
class RunResult:
    """Everything produced by one solve."""

    config: ExperimentConfig
    problem: Problem
    mesh: Mesh
    transform: ComplexTransform
    book: StencilBook
    boundary_stencils: dict
    system: LinearSystem
    field: SolutionField
    reference_kind: str = 'none'
    errors: np.ndarray | None = None
    norms: ErrorNorms | None = None
    exact: SeriesSolution | None = None
    warnings: list = dataclasses.field(default_factory=list)
    timings: dict = dataclasses.field(default_factory=dict)

    @property
    def kappa_h(self) -> float:
        return self.problem.kappa * self.mesh.h

    def summary(self) -> dict:
        """Run summary with the fully resolved configuration and the achieved layer radii."""
        mesh = self.mesh
        slaved = sum(stencil.slaved for stencil in self.boundary_stencils.values())
        summary = {
            'version': __version__,
            'name': self.config.name,
            'config': dump_config(self.config),
            'n': mesh.n,
            'h': mesh.h,
            'kappa': self.problem.kappa,
            'kappa_h': self.kappa_h,
            'r_star': mesh.r_star,
            'r_max': mesh.r_max,
            'kappa_d': self.problem.kappa * (mesh.r_max - mesh.r_star),
            'transform': {
                'kind': self.transform.kind.value,
                'alpha': self.transform.alpha,
                'alpha1': self.transform.alpha1,
                'alpha2': self.transform.alpha2,
            },
            'mesh': mesh.stats(),
            'stencils': {
                'order': self.book.order,
                'modes': self.book.mode_counts(),
                'boundary': len(self.boundary_stencils),
                'slaved': slaved,
            },
            'unknowns': self.system.size,
            'nonzeros': int(self.system.matrix.nnz),
            'residual': self.field.residual,
            'residual_flagged': self.field.flagged,
            'max_abs': self.field.max_abs,
            'timings': {**self.timings, **self.field.timings},
            'warnings': list(self.warnings),
            'reference': self.reference_kind,
        }
        if self.norms is not None:
            summary['errors'] = {
                'linf': self.norms.linf,
                'l2': self.norms.l2,
                'compared': self.norms.compared,
                'unmatched': self.norms.unmatched,
            }
        if self.exact is not None and self.transform.kind is not TransformKind.IDENTITY:
            summary['decay'] = decay_check(self.exact, self.transform, self.problem.kappa).as_dict()
        return summary


def build_mesh(config: ExperimentConfig, n: int | None = None, snap_divisor: int | None = None) -> Mesh:
    """Mesh of ``config`` with ``n`` angular cells, ``mesh.n`` or the ``kappa_h`` target otherwise."""
    kappa = config.problem.kappa
    r_star = config.pml.r_star
    r_max = config.pml.target_r_max(kappa)
    n = n or config.mesh.resolve_n(kappa, r_star)
    snap_divisor = snap_divisor or config.mesh.snap_divisor
    scatterer = config.problem.scatterer.build()
    if config.mesh.coordinate_system is CoordinateSystem.REGULAR:
        return build_regular_polar(
            kappa, r_star, r_max, n, scatterer.radius, snap_divisor=snap_divisor, center=config.mesh.center
        )
    return build_stretched(
        kappa,
        r_star,
        r_max,
        n,
        scatterer,
        config.mesh.refinement.build(),
        snap_divisor=snap_divisor,
        center=config.mesh.center,
    )


def transform_for_mesh(config: ExperimentConfig, mesh: Mesh) -> ComplexTransform:
    """Layer transform on the radii the mesh actually achieved, in its first coordinate."""
    pml = config.pml
    kappa = config.problem.kappa
    kind = TransformKind(pml.transform_kind(mesh.coords))
    alpha2 = None if pml.alpha2 is None else complex(*pml.alpha2)
    if kind is TransformKind.LINEAR_S:
        if alpha2 is None:
            alpha2 = auto_alpha2(kappa, mesh.first_star, mesh.first_max, pml.t)
        return ComplexTransform(kind, mesh.first_star, mesh.first_max, alpha2=alpha2)
    return build_transform(
        kind, kappa, mesh.r_star, mesh.r_max, t=pml.t, alpha=pml.alpha, alpha1=pml.alpha1, alpha2=alpha2, n=pml.n
    )


def _reference_kind(config: ExperimentConfig, exact: SeriesSolution | None) -> str:
    kind = config.reference.kind
    if kind == 'auto':
        return 'exact' if exact is not None else 'none'
    if kind == 'exact' and exact is None:
        raise ConfigurationError('reference.kind is exact but the problem has no series solution')
    return kind


def solve_config(config: ExperimentConfig, *, n: int | None = None, snap_divisor: int | None = None,
                 reference=True) -> RunResult:
    """Solve ``config`` once.

    :param reference: ``True`` resolves ``config.reference``, ``False`` skips the error report, and a
        :class:`~helmholtz_fd.verify.LatticeValues` or :class:`SolutionField` is used as the reference field.
    """
    start = time.perf_counter()
    problem = config.problem.build()
    recorded = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always', HelmholtzWarning)
        mesh = build_mesh(config, n, snap_divisor)
        transform = transform_for_mesh(config, mesh)
        check_source_clearance(mesh, problem.source)
        meshed = time.perf_counter()

        coeffs = PdeCoeffs(mesh.coords, problem.kappa, transform, problem.source, mesh.center)
        method = config.method
        settings = method.settings()
        book = StencilBook(mesh, coeffs, order=method.order, pollution=method.pollution, settings=settings)
        book.build(method.threads)
        boundary_stencils = build_boundary_stencils(mesh, problem.kappa, settings=settings, threads=method.threads)
        stenciled = time.perf_counter()

        system = assemble(mesh, book, problem, boundary_stencils)
        assembled = time.perf_counter()
        field = solve(system)

        exact = exact_solution(problem, transform, mesh.center)
        result = RunResult(config, problem, mesh, transform, book, boundary_stencils, system, field, exact=exact)
        if reference is True:
            _compare(result, snap_divisor)
        elif reference is not False and reference is not None:
            result.reference_kind = 'grid'
            _set_errors(result, reference)
    for warning in caught:
        message = f'{warning.category.__name__}: {warning.message}'
        if message not in recorded:
            recorded.append(message)
        warnings.warn_explicit(warning.message, warning.category, warning.filename, warning.lineno)
    result.warnings = recorded
    result.timings = {
        'mesh': meshed - start,
        'stencils': stenciled - meshed,
        'assemble': assembled - stenciled,
        'total': time.perf_counter() - start,
    }
    return result


def _set_errors(result: RunResult, reference) -> None:
    errors, unmatched = pointwise_errors(result.field, reference, result.mesh)
    compared = errors[np.isfinite(errors)]
    if len(compared):
        norms = ErrorNorms(float(compared.max()), float(np.sqrt(np.mean(compared**2))), len(compared), unmatched)
    else:
        norms = ErrorNorms(0.0, 0.0, 0, unmatched)
    result.errors, result.norms = errors, norms
    LOGGER.info(f'errors against the {result.reference_kind} reference: l_inf {norms.linf:.3e}, l_2 {norms.l2:.3e}')


def _compare(result: RunResult, snap_divisor: int | None) -> None:
    config = result.config
    kind = _reference_kind(config, result.exact)
    result.reference_kind = kind
    if kind == 'none':
        return
    if kind == 'exact':
        _set_errors(result, result.exact)
    elif kind == 'file':
        _set_errors(result, artifacts.load_field(config.reference.path))
    else:
        n_ref = config.reference.n
        if n_ref % result.mesh.n:
            raise MeshMismatch(f'reference N = {n_ref} is not a multiple of N = {result.mesh.n}')
        divisor = gcd(snap_divisor or config.mesh.snap_divisor or result.mesh.n, result.mesh.n)
        LOGGER.info(f'solving the reference with N = {n_ref}')
        fine = solve_config(config, n=n_ref, snap_divisor=divisor, reference=False)
        _set_errors(result, LatticeValues.from_field(fine.field))


def diagnostic_reason(result: RunResult, order: float | None = None) -> str | None:
    """Why ``result`` needs a diagnostic bundle, ``None`` when it does not.

    :param order: convergence order of the mesh against the previous mesh of a study.
    """
    threshold = result.config.outputs.error_threshold
    min_order = result.config.study.min_order
    if result.field.flagged:
        return f'relative residual {result.field.residual:.2e} above tolerance'
    if threshold is not None and result.norms is not None and result.norms.linf > threshold:
        return f'l_inf error {result.norms.linf:.3e} above the threshold {threshold:.3e}'
    if order is not None and min_order is not None and order < min_order:
        return f'convergence order {order:.2f} below {min_order:.2f}'
    return None


def write_diagnostics(result: RunResult, directory, reason: str, summary: dict | None = None) -> pathlib.Path:
    return artifacts.write_diagnostics(
        directory,
        mesh=result.mesh,
        book=result.book,
        boundary_stencils=result.boundary_stencils,
        system=result.system,
        summary=result.summary() if summary is None else summary,
        reason=reason,
    )


def write_outputs(result: RunResult, out_dir) -> dict:
    """Write the files requested by ``config.outputs``, returning their paths by name."""
    out_dir = pathlib.Path(out_dir)
    outputs = result.config.outputs
    written = {}
    if outputs.mesh_csv:
        written['mesh'] = artifacts.write_mesh_csv(result.mesh, out_dir / 'mesh.csv')
    if outputs.field_csv:
        written['field'] = artifacts.write_field_csv(result.field, out_dir / 'field.csv', result.errors)
    if outputs.field_npz:
        written['field_npz'] = artifacts.write_field_npz(result.field, out_dir / 'field.npz')
    if outputs.stencils:
        written['stencils'] = artifacts.write_stencils_json(
            result.mesh, result.book, result.boundary_stencils, out_dir / 'stencils.json'
        )
    if outputs.triplets:
        written['triplets'] = artifacts.write_triplets(result.system, out_dir / 'triplets.txt')

    summary = result.summary()
    reason = diagnostic_reason(result)
    if reason:
        written['diagnostics'] = write_diagnostics(result, out_dir / 'diagnostics', reason, summary)
    summary['files'] = {name: str(path) for name, path in written.items()}
    written['summary'] = artifacts.write_summary(summary, out_dir / 'summary.json')
    return written


def run(config: ExperimentConfig, out_dir=None) -> RunResult:
    """Solve once and write the outputs to ``out_dir``, ``config.outputs.dir`` by default."""
    result = solve_config(config)
    write_outputs(result, out_dir or config.outputs.dir)
    return result


def _study_reference(config: ExperimentConfig, n_list, divisor: int, pollution: bool):
    """Reference field of a convergence study, ``None`` when the exact solution is used."""
    n_ref = config.study.reference_n or config.reference.n
    if config.reference.kind == 'file':
        return 'file', artifacts.load_field(config.reference.path)
    if n_ref is None or config.reference.kind == 'exact':
        return 'exact', None
    if any(n_ref % n for n in n_list):
        raise ConfigurationError(f'reference N = {n_ref} must be a multiple of every N of the study')
    LOGGER.info(f'solving the study reference with N = {n_ref}')
    reference_config = config.with_overrides(**{'method.pollution': pollution})
    fine = solve_config(reference_config, n=n_ref, snap_divisor=divisor, reference=False)
    return 'grid', LatticeValues.from_field(fine.field)


def _study_errors(config: ExperimentConfig, n: int, divisor: int, reference) -> RunResult:
    kind, values = reference
    if kind == 'exact':
        result = solve_config(config, n=n, snap_divisor=divisor, reference=False)
        if result.exact is None:
            raise ConfigurationError('the problem has no series solution to compare with')
        result.reference_kind = 'exact'
        _set_errors(result, result.exact)
        return result
    result = solve_config(config, n=n, snap_divisor=divisor, reference=values)
    result.reference_kind = kind
    return result


def _diagnose(result: RunResult, out_dir, cell: str, order: float | None = None) -> str | None:
    """Write the bundle of a study mesh or sweep cell that missed its tolerance, returning its directory."""
    reason = diagnostic_reason(result, order)
    if reason is None:
        return None
    if out_dir is None:
        LOGGER.warning(f'{cell}: {reason}, no output directory for the diagnostic bundle')
        return None
    return str(write_diagnostics(result, pathlib.Path(out_dir) / 'diagnostics' / cell, reason))


def convergence_study(config: ExperimentConfig, out_dir=None) -> list[dict]:
    """Errors and successive convergence orders over ``study.n_list``.

    With ``study.pollution_pairing`` every mesh is also solved with generic
    stencils and ``R`` reports the relative error reduction of the minimized ones.
    """
    n_list = list(config.study.n_list)
    if len(n_list) < 2:
        raise ConfigurationError('study.n_list needs at least two entries')
    n_ref = config.study.reference_n or config.reference.n
    divisor = study_snap_divisor(n_list + ([n_ref] if n_ref else []))
    reference = _study_reference(config, n_list, divisor, True)

    rows, generic_errors, bundles = [], [], {}
    previous = None
    for n in n_list:
        result = _study_errors(config, n, divisor, reference)
        row = {
            'h': result.mesh.h,
            'kappa_h': result.kappa_h,
            'n_nodes': result.mesh.size,
            'err_linf': result.norms.linf,
            'err_l2': result.norms.l2,
            'n': n,
        }
        if config.study.pollution_pairing:
            generic = _study_errors(config.with_overrides(**{'method.pollution': False}), n, divisor, reference)
            generic_errors.append(generic.norms.linf)
            row['err_linf_generic'] = generic.norms.linf
        order = None
        if previous is not None and previous[1] > 0 and row['err_linf'] > 0:
            order = convergence_order([previous, (row['h'], row['err_linf'])])[0]
        previous = (row['h'], row['err_linf'])
        bundle = _diagnose(result, out_dir, f'n{n}', order)
        if bundle:
            bundles[n] = bundle
        LOGGER.info(f'N = {n}: kappa h = {row["kappa_h"]:.4f}, l_inf error {row["err_linf"]:.3e}')
        rows.append(row)

    rows = convergence_table(rows, generic_errors or None)

    if out_dir is not None:
        out_dir = pathlib.Path(out_dir)
        artifacts.write_convergence_csv(rows, out_dir / 'convergence.csv')
        artifacts.write_summary({
            'version': __version__,
            'config': dump_config(config),
            'reference': reference[0],
            'rows': rows,
            'diagnostics': bundles,
        }, out_dir / 'convergence.json')
    return rows


def sweep_cell_config(config: ExperimentConfig, kappa: float, kappa_d: float) -> ExperimentConfig:
    """Configuration of one ``(kappa, kappa d)`` cell of a layer sweep."""
    return config.with_overrides(**{'problem.kappa': kappa, 'pml.kappa_d': kappa_d, 'pml.r_max': None})


def pml_sweep(config: ExperimentConfig, out_dir=None) -> list[dict]:
    """``l_inf`` errors against the series solution for every ``(kappa, kappa d)`` pair of the study lists."""
    kappas = list(config.study.kappa_list) or [config.problem.kappa]
    widths = list(config.study.kappa_d_list)
    if not widths:
        raise ConfigurationError('study.kappa_d_list must not be empty')
    cells = [(kappa, kappa_d) for kappa in kappas for kappa_d in widths]

    def compute(cell):
        kappa, kappa_d = cell
        cell_config = sweep_cell_config(config, kappa, kappa_d)
        result = solve_config(cell_config, reference=False)
        if result.exact is None:
            raise ConfigurationError('a layer sweep needs a problem with a series solution')
        result.reference_kind = 'exact'
        _set_errors(result, result.exact)
        LOGGER.info(f'kappa = {kappa:g}, kappa d = {kappa_d:g}: l_inf error {result.norms.linf:.3e}')
        bundle = _diagnose(result, out_dir, f'kappa{kappa:g}_kd{kappa_d:g}')
        if bundle:
            bundles[cell] = bundle
        return {
            'kappa': kappa,
            'kappa_d': kappa_d,
            'n': result.mesh.n,
            'kappa_h': result.kappa_h,
            'r_star': result.mesh.r_star,
            'r_max': result.mesh.r_max,
            'err_linf': result.norms.linf,
            'err_l2': result.norms.l2,
        }

    bundles = {}
    rows = [compute(cell) for cell in cells]

    if out_dir is not None:
        out_dir = pathlib.Path(out_dir)
        artifacts.write_sweep_csv(rows, out_dir / 'pml_sweep.csv')
        artifacts.write_summary({
            'version': __version__,
            'config': dump_config(config),
            'kappa_list': kappas,
            'kappa_d_list': widths,
            'diagnostics': {f'{kappa:g}, {kappa_d:g}': path for (kappa, kappa_d), path in bundles.items()},
            'errors': [[row['err_linf'] for row in rows[i * len(widths):(i + 1) * len(widths)]]
                       for i in range(len(kappas))],
        }, out_dir / 'pml_sweep.json')
    return rows
