# -*- coding: utf-8 -*-
"""Workchain to sweep wavenumbers and layer widths."""
from aiida import orm
from aiida.common import AttributeDict
from aiida.engine import ToContext, WorkChain
from aiida.plugins import WorkflowFactory

from ..config import ExperimentConfig
from .cleanup import CleanWorkdirMixin
from .protocols.utils import ProtocolMixin, recursive_merge

HelmholtzBaseWorkChain = WorkflowFactory('helmholtz_fd.base')


def cell_label(kappa: float, kappa_d: float) -> str:
    return f'kappa_{kappa:g}_kappa_d_{kappa_d:g}'.replace('.', '_')


def error_matrix(kappas: list, widths: list, summaries: dict) -> dict:
    """Arrange the errors of the cells by wavenumber (rows) and layer width (columns)."""
    matrix = {'kappa_list': list(kappas), 'kappa_d_list': list(widths), 'err_linf': [], 'err_l2': [], 'r_max': []}
    for kappa in kappas:
        cells = [summaries[cell_label(kappa, width)] for width in widths]
        matrix['err_linf'].append([cell['errors']['linf'] for cell in cells])
        matrix['err_l2'].append([cell['errors']['l2'] for cell in cells])
        matrix['r_max'].append([cell['r_max'] for cell in cells])
    return matrix


class HelmholtzPmlSweepWorkChain(CleanWorkdirMixin, ProtocolMixin, WorkChain):
    """
    Workchain solving a problem with a series solution for every pair of
    wavenumber and layer width and collecting the errors.
    """

    @classmethod
    def define(cls, spec):

        super().define(spec)
        spec.expose_inputs(
            HelmholtzBaseWorkChain,
            namespace='solve',
            exclude=('clean_workdir',),
            namespace_options={
                'help': 'Inputs for the Helmholtz Base Workchain.'
            }
        )
        spec.input(
            'kappa_list',
            valid_type=orm.List,
            required=False,
            help='Wavenumbers, ``study.kappa_list`` of the parameters by default.'
        )
        spec.input(
            'kappa_d_list',
            valid_type=orm.List,
            required=False,
            help='Layer widths times the wavenumber, ``study.kappa_d_list`` of the parameters by default.'
        )
        spec.input(
            'clean_workdir',
            valid_type=orm.Bool,
            default=lambda: orm.Bool(False),
            help=(
                'If `True`, work directories of all called calculations will '
                'be cleaned at the end of the workflow.'
            )
        )

        spec.outline(
            cls.setup,
            cls.run_cells,
            cls.inspect_cells,
            cls.results,
        )

        spec.output(
            'error_matrix',
            valid_type=orm.Dict,
            help='Errors by wavenumber (rows) and layer width (columns).'
        )

        spec.exit_code(
            401,
            'ERROR_SUB_PROCESS_FAILED',
            message='A Helmholtz calculation of the sweep failed.'
        )
        spec.exit_code(
            403,
            'ERROR_EMPTY_SWEEP',
            message='The sweep has no wavenumber or no layer width.'
        )

    @classmethod
    def get_protocol_filepath(cls):
        """Return ``pathlib.Path`` to the ``.yaml`` file that defines the protocols."""
        from importlib_resources import files

        from .protocols import helmholtz as protocols
        return files(protocols) / 'pml_sweep.yaml'

    @classmethod
    def get_builder_from_protocol(
        cls,
        code: orm.Code,
        preset: str = 'ex2-sweep',
        protocol: str = None,
        overrides: dict = None,
        options: dict = None,
        **kwargs
    ):
        """
        Return a builder prepopulated with inputs based on a provided
        protocol. If no protocol is given, the default protocol is set
        as moderate.

        :param code:
            The ``Code`` instance of the ``helmholtz-fd`` executable.
        :param preset:
            Name of the experiment preset providing the sweep lists.
        :param protocol:
            Protocol to use. Options are moderate, precise, or fast.
        :param overrides:
            Optional dictionary of inputs that will override the values
            provided from the protocol file.
        :param options:
            A dictionary of options that will be recursively set for the
            ``metadata.options`` input of all the ``CalcJobs`` that are
            nested in this work chain.

        :return:
            A builder instance with all the inputs defined and ready to
            launch.
        """
        inputs = cls.get_protocol_inputs(protocol, overrides)

        solve = HelmholtzBaseWorkChain.get_builder_from_protocol(
            code,
            preset,
            protocol=protocol,
            overrides=inputs['solve'],
            options=options,
        )
        solve.pop('clean_workdir', None)

        builder = cls.get_builder()

        builder.solve = solve
        builder.clean_workdir = orm.Bool(inputs['clean_workdir'])

        for kwarg in kwargs.keys():
            if kwarg in list(cls.spec().inputs.keys()):
                setattr(builder, kwarg, kwargs[kwarg])

        return builder

    def setup(self):
        """Resolve the lists of the sweep."""
        parameters = self.inputs.solve.helmholtz.parameters.get_dict()
        config = ExperimentConfig.model_validate(parameters)

        kappas = self.inputs.kappa_list.get_list() if 'kappa_list' in self.inputs else config.study.kappa_list
        widths = self.inputs.kappa_d_list.get_list() if 'kappa_d_list' in self.inputs else config.study.kappa_d_list
        self.ctx.kappas = [float(kappa) for kappa in (kappas or [config.problem.kappa])]
        self.ctx.widths = [float(width) for width in widths]
        self.ctx.parameters = parameters

    def run_cells(self):
        """Run a `HelmholtzBaseWorkChain` for every cell of the sweep."""
        if not self.ctx.widths:
            self.report('no layer widths to sweep')
            return self.exit_codes.ERROR_EMPTY_SWEEP

        calcs = {}
        for kappa in self.ctx.kappas:
            for width in self.ctx.widths:
                label = cell_label(kappa, width)
                updates = {
                    'problem': {'kappa': kappa},
                    'pml': {'kappa_d': width, 'r_max': None},
                    'reference': {'kind': 'exact'},
                }
                inputs = AttributeDict(self.exposed_inputs(HelmholtzBaseWorkChain, namespace='solve'))
                inputs.helmholtz = AttributeDict(inputs.helmholtz)
                inputs.helmholtz.parameters = orm.Dict(recursive_merge(self.ctx.parameters, updates))
                inputs.metadata = AttributeDict(inputs.get('metadata', {}))
                inputs.metadata.label = label
                inputs.metadata.call_link_label = label

                calcs[label] = self.submit(HelmholtzBaseWorkChain, **inputs)
                self.report(f'launching HelmholtzBaseWorkChain<{calcs[label].pk}> with kappa {kappa:g}, '
                            f'kappa d {width:g}')

        return ToContext(**calcs)

    def inspect_cells(self):
        """Check every cell of the sweep."""
        summaries = {}
        for kappa in self.ctx.kappas:
            for width in self.ctx.widths:
                calc = self.ctx[cell_label(kappa, width)]
                if not calc.is_finished_ok:
                    self.report(f'HelmholtzBaseWorkChain<{calc.pk}> with kappa {kappa:g}, kappa d {width:g} failed.')
                    return self.exit_codes.ERROR_SUB_PROCESS_FAILED
                summaries[calc.label] = calc.outputs.output_parameters.get_dict()

        self.ctx.summaries = summaries
        return None

    def results(self):
        """
        Gather the error matrix and set it as output.
        """
        matrix = orm.Dict(error_matrix(self.ctx.kappas, self.ctx.widths, self.ctx.summaries))
        matrix.store()

        self.out('error_matrix', matrix)
