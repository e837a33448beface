# -*- coding: utf-8 -*-
"""Command line interface ``helmholtz-fd``."""
import functools
import json
import pathlib
import sys

import click
import pydantic
import yaml

from . import __version__
from .config import ExperimentConfig, config_from_preset, load_config
from .exceptions import ConfigurationError, NumericalError
from .log import configure_logging

EXIT_CONFIGURATION = 2
EXIT_NUMERICAL = 3


def _dotted(values) -> dict:
    """Parse ``section.field=value`` pairs, values being read as YAML scalars or lists."""
    updates = {}
    for item in values:
        key, separator, value = item.partition('=')
        if not separator or not key:
            raise click.BadParameter(f'expected KEY=VALUE, got `{item}`', param_hint='--set')
        updates[key.strip()] = yaml.safe_load(value)
    return updates


def _handle_errors(command):
    """Map configuration and numerical errors onto the exit codes of the interface."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except pydantic.ValidationError as exception:
            for error in exception.errors():
                location = '.'.join(str(part) for part in error['loc'])
                click.echo(f'Error: {location}: {error["msg"]}', err=True)
            sys.exit(EXIT_CONFIGURATION)
        except ConfigurationError as exception:
            click.echo(f'Error: {exception}', err=True)
            sys.exit(EXIT_CONFIGURATION)
        except NumericalError as exception:
            click.echo(f'Error: {type(exception).__name__}: {exception}', err=True)
            sys.exit(EXIT_NUMERICAL)

    return wrapper


def experiment_options(command):
    """Options shared by every verb that reads an experiment."""
    options = [
        click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False, path_type=pathlib.Path),
                     help='JSON or YAML experiment file.'),
        click.option('--preset', help='Name of a shipped preset, used when no --config is given.'),
        click.option('--out', 'out_dir', type=click.Path(file_okay=False, path_type=pathlib.Path),
                     help='Output directory, overrides outputs.dir.'),
        click.option('--threads', type=click.IntRange(min=1), help='Threads of the stencil computation.'),
        click.option('--pollution', type=click.Choice(['on', 'off']), help='Pollution minimized stencils.'),
        click.option('--set', 'updates', multiple=True, metavar='KEY=VALUE',
                     help='Override a configuration field, e.g. --set mesh.n=96.'),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def resolve_config(config_path=None, preset=None, out_dir=None, threads=None, pollution=None,
                   updates=()) -> ExperimentConfig:
    """Experiment configuration from a file or a preset with the command line overrides applied."""
    config = load_config(config_path) if config_path else config_from_preset(preset)
    overrides = _dotted(updates)
    if out_dir is not None:
        overrides['outputs.dir'] = str(out_dir)
    if threads is not None:
        overrides['method.threads'] = threads
    if pollution is not None:
        overrides['method.pollution'] = pollution == 'on'
    return config.with_overrides(**overrides) if overrides else config


@click.group()
@click.version_option(__version__, prog_name='helmholtz-fd')
@click.option('-v', '--verbosity', type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False),
              help='Log level, defaults to the HELMHOLTZ_FD_LOG environment variable.')
def cli(verbosity):
    """High-order finite differences for exterior Helmholtz problems with circular PMLs."""
    configure_logging(verbosity)


@cli.command('presets')
def presets():
    """List the shipped experiment presets."""
    from .presets import available_presets, default_preset

    default = default_preset()
    for name, values in available_presets().items():
        marker = '*' if name == default else ' '
        click.echo(f'{marker} {name:<14} {values["description"]}')


@cli.command('run')
@experiment_options
@_handle_errors
def run(**kwargs):
    """Solve one experiment and write the field and the summary."""
    from .runner import run as run_experiment

    config = resolve_config(**kwargs)
    result = run_experiment(config)
    summary = result.summary()
    click.echo(f'N = {summary["n"]}, kappa h = {summary["kappa_h"]:.4f}, {summary["unknowns"]} unknowns')
    click.echo(f'r_star = {summary["r_star"]:.6f}, r_max = {summary["r_max"]:.6f}, kappa d = {summary["kappa_d"]:.4f}')
    click.echo(f'relative residual {summary["residual"]:.2e}')
    if 'errors' in summary:
        errors = summary['errors']
        click.echo(f'{summary["reference"]} reference: l_inf {errors["linf"]:.4e}, l_2 {errors["l2"]:.4e}')
    click.echo(f'written to {config.outputs.dir}')


def _format(value) -> str:
    if value is None:
        return '-'
    return f'{value:.4e}' if isinstance(value, float) else str(value)


@cli.command('convergence-study')
@experiment_options
@_handle_errors
def convergence_study(**kwargs):
    """Errors and convergence orders over the N list of the study."""
    from .runner import convergence_study as study

    config = resolve_config(**kwargs)
    rows = study(config, config.outputs.dir)
    columns = ('n', 'kappa_h', 'err_linf', 'order_linf', 'err_l2', 'order_l2', 'R')
    click.echo('  '.join(f'{column:>11}' for column in columns))
    for row in rows:
        click.echo('  '.join(f'{_format(row.get(column)):>11}' for column in columns))


@cli.command('pml-sweep')
@experiment_options
@_handle_errors
def pml_sweep(**kwargs):
    """Error matrix over the wavenumbers and layer widths of the study."""
    from .runner import pml_sweep as sweep

    config = resolve_config(**kwargs)
    rows = sweep(config, config.outputs.dir)
    widths = sorted({row['kappa_d'] for row in rows})
    click.echo(f'{"kappa":>8}' + ''.join(f'{width:>12g}' for width in widths))
    for kappa in sorted({row['kappa'] for row in rows}):
        cells = {row['kappa_d']: row['err_linf'] for row in rows if row['kappa'] == kappa}
        click.echo(f'{kappa:>8g}' + ''.join(f'{cells[width]:>12.3e}' for width in widths))


@cli.command('dump-mesh')
@experiment_options
@click.option('-n', 'n', type=click.IntRange(min=8), help='Number of angular cells, overrides mesh.n.')
@_handle_errors
def dump_mesh(n, **kwargs):
    """Write the nodes of the mesh with their classes as CSV."""
    from .artifacts import write_mesh_csv
    from .runner import build_mesh

    config = resolve_config(**kwargs)
    mesh = build_mesh(config, n)
    path = write_mesh_csv(mesh, pathlib.Path(config.outputs.dir) / 'mesh.csv')
    click.echo(json.dumps(mesh.stats(), indent=2))
    click.echo(f'{mesh.size} nodes written to {path}')


@cli.command('dump-stencil')
@experiment_options
@click.option('-n', 'n', type=click.IntRange(min=8), help='Number of angular cells, overrides mesh.n.')
@click.option('--node', type=int, help='Print the stencil of this node instead of writing all of them.')
@_handle_errors
def dump_stencil(n, node, **kwargs):
    """Write every distinct stencil of the mesh as JSON."""
    from .artifacts import write_stencils_json
    from .boundary import build_boundary_stencils
    from .mesh import NodeClass
    from .runner import build_mesh, transform_for_mesh
    from .stencils.book import StencilBook
    from .stencils.pde import PdeCoeffs

    config = resolve_config(**kwargs)
    problem = config.problem.build()
    mesh = build_mesh(config, n)
    coeffs = PdeCoeffs(mesh.coords, problem.kappa, transform_for_mesh(config, mesh), problem.source, mesh.center)
    method = config.method
    settings = method.settings()
    book = StencilBook(mesh, coeffs, order=method.order, pollution=method.pollution, settings=settings)

    if node is not None:
        if not 0 <= node < mesh.size:
            raise ConfigurationError(f'node {node} is not part of the mesh with {mesh.size} nodes')
        node_class = NodeClass(int(mesh.node_class[node]))
        if node_class.is_dirichlet:
            raise ConfigurationError(f'node {node} is a {node_class.name.lower()} node without stencil')
        if node_class is NodeClass.NEAR_BOUNDARY:
            stencil = build_boundary_stencils(mesh, problem.kappa, settings=settings)[node].as_dict(mesh)
        else:
            stencil = book.stencil(node).as_dict((float(mesh.x[node]), float(mesh.y[node])))
        click.echo(json.dumps(stencil, indent=2))
        return

    book.build(method.threads)
    boundary = build_boundary_stencils(mesh, problem.kappa, settings=settings, threads=method.threads)
    path = write_stencils_json(mesh, book, boundary, pathlib.Path(config.outputs.dir) / 'stencils.json')
    click.echo(f'{len(book.items())} mesh stencils and {len(boundary)} boundary stencils written to {path}')


@cli.command('selfcheck')
@click.option('--check', 'names', multiple=True, help='Run only the named checks.')
@_handle_errors
def selfcheck(names):
    """Run the numerical self checks, exit code 3 if one fails."""
    from .selfcheck import CHECKS, run_checks

    unknown = sorted(set(names) - set(CHECKS))
    if unknown:
        raise ConfigurationError(f'unknown checks {unknown}, choose from {sorted(CHECKS)}')
    results = run_checks(names)
    for result in results:
        status = 'ok' if result.passed else 'FAILED'
        click.echo(f'{result.name:<36} {result.value:>11.3e} {result.tolerance:>9.1e}  {status}  {result.detail}')
    if not all(result.passed for result in results):
        sys.exit(EXIT_NUMERICAL)
