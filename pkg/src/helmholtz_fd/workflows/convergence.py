# -*- coding: utf-8 -*-
"""Workchain to run a mesh convergence study."""
from aiida import orm
from aiida.common import AttributeDict
from aiida.engine import ToContext, WorkChain, if_
from aiida.plugins import WorkflowFactory

from ..calculations.functions.create_convergence_table import create_convergence_table
from ..config import ExperimentConfig
from ..mesh import study_snap_divisor
from .cleanup import CleanWorkdirMixin
from .protocols.utils import ProtocolMixin, recursive_merge

HelmholtzBaseWorkChain = WorkflowFactory('helmholtz_fd.base')


def study_row(summary: dict) -> dict:
    """Row of a convergence table from the summary of one run."""
    return {
        'n': summary['n'],
        'h': summary['h'],
        'kappa_h': summary['kappa_h'],
        'n_nodes': summary['mesh']['nodes'],
        'err_linf': summary['errors']['linf'],
        'err_l2': summary['errors']['l2'],
    }


class HelmholtzConvergenceWorkChain(CleanWorkdirMixin, ProtocolMixin, WorkChain):
    """
    Workchain computing errors and convergence orders over a list of meshes.

    Without a reference mesh size the errors are taken against the exact
    series solution of the problem.
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
            'n_list',
            valid_type=orm.List,
            required=False,
            help='Increasing numbers of angular cells, ``study.n_list`` of the parameters by default.'
        )
        spec.input(
            'reference_n',
            valid_type=orm.Int,
            required=False,
            help=(
                'Number of angular cells of the reference mesh, a multiple of every '
                'entry of ``n_list``. Defaults to ``study.reference_n`` of the parameters.'
            )
        )
        spec.input(
            'pollution_pairing',
            valid_type=orm.Bool,
            default=lambda: orm.Bool(False),
            help='Also solve every mesh with generic stencils and report the error reduction.'
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
            if_(cls.should_run_reference)(
                cls.run_reference,
                cls.inspect_reference,
            ),
            cls.run_solves,
            cls.inspect_solves,
            cls.results,
        )

        spec.output(
            'convergence_table',
            valid_type=orm.Dict,
            help='Errors and successive convergence orders of the meshes.'
        )
        spec.output(
            'reference_field',
            valid_type=orm.SinglefileData,
            required=False,
            help='The field of the reference mesh.'
        )

        spec.exit_code(
            401,
            'ERROR_SUB_PROCESS_FAILED',
            message='A Helmholtz calculation of the study failed.'
        )
        spec.exit_code(
            402,
            'ERROR_REFERENCE_FAILED',
            message='The reference calculation failed.'
        )

    @classmethod
    def get_protocol_filepath(cls):
        """Return ``pathlib.Path`` to the ``.yaml`` file that defines the protocols."""
        from importlib_resources import files

        from .protocols import helmholtz as protocols
        return files(protocols) / 'convergence.yaml'

    @classmethod
    def get_builder_from_protocol(
        cls,
        code: orm.Code,
        preset: str = None,
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
            Name of the experiment preset providing the meshes of the study.
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
        builder.pollution_pairing = orm.Bool(inputs['pollution_pairing'])
        builder.clean_workdir = orm.Bool(inputs['clean_workdir'])

        # See if any of the other values are passed in with kwargs.
        for kwarg in kwargs.keys():
            if kwarg in list(cls.spec().inputs.keys()):
                setattr(builder, kwarg, kwargs[kwarg])

        return builder

    def setup(self):
        """
        Resolve the meshes of the study and the common snapping of their radii.
        """
        parameters = self.inputs.solve.helmholtz.parameters.get_dict()
        config = ExperimentConfig.model_validate(parameters)

        n_list = self.inputs.n_list.get_list() if 'n_list' in self.inputs else list(config.study.n_list)
        reference_n = self.inputs.reference_n.value if 'reference_n' in self.inputs else config.study.reference_n

        self.ctx.n_list = [int(n) for n in n_list]
        self.ctx.reference_n = reference_n
        divisor = study_snap_divisor(self.ctx.n_list + ([reference_n] if reference_n else []))
        self.ctx.parameters = recursive_merge(parameters, {'mesh': {'snap_divisor': divisor}})
        self.ctx.reference_field = None
        self.report(f'study over N = {self.ctx.n_list} with reference N = {reference_n or "exact"}')

    def _inputs(self, label: str, **updates) -> AttributeDict:
        inputs = AttributeDict(self.exposed_inputs(HelmholtzBaseWorkChain, namespace='solve'))
        inputs.helmholtz = AttributeDict(inputs.helmholtz)
        inputs.helmholtz.parameters = orm.Dict(recursive_merge(self.ctx.parameters, updates))
        inputs.metadata = AttributeDict(inputs.get('metadata', {}))
        inputs.metadata.label = label
        inputs.metadata.call_link_label = label
        return inputs

    def should_run_reference(self):
        """Only studies with a reference mesh size solve a reference first."""
        return self.ctx.reference_n is not None

    def run_reference(self):
        """Run a `HelmholtzBaseWorkChain` on the reference mesh."""
        inputs = self._inputs(
            'reference', mesh={'n': self.ctx.reference_n}, reference={'kind': 'none'}, outputs={'field_npz': True}
        )
        future = self.submit(HelmholtzBaseWorkChain, **inputs)
        self.report(f'launching HelmholtzBaseWorkChain<{future.pk}> on the reference mesh N = {self.ctx.reference_n}')

        return ToContext(reference=future)

    def inspect_reference(self):
        """Keep the reference field."""
        calc = self.ctx.reference

        if not calc.is_finished_ok or 'field' not in calc.outputs:
            self.report(f'HelmholtzBaseWorkChain<{calc.pk}> of the reference failed.')
            return self.exit_codes.ERROR_REFERENCE_FAILED

        self.ctx.reference_field = calc.outputs.field
        return None

    def run_solves(self):
        """Run a `HelmholtzBaseWorkChain` for every mesh, twice with the pollution pairing."""
        variants = [('', True)]
        if self.inputs.pollution_pairing.value:
            variants.append(('_generic', False))

        calcs = {}
        for n in self.ctx.n_list:
            for suffix, pollution in variants:
                label = f'n_{n}{suffix}'
                updates = {'mesh': {'n': n}, 'method': {'pollution': pollution}}
                if self.ctx.reference_field is None:
                    updates['reference'] = {'kind': 'exact'}
                inputs = self._inputs(label, **updates)
                if self.ctx.reference_field is not None:
                    inputs.helmholtz.reference = self.ctx.reference_field
                calcs[label] = self.submit(HelmholtzBaseWorkChain, **inputs)
                self.report(f'launching HelmholtzBaseWorkChain<{calcs[label].pk}> with N = {n}{suffix}')

        return ToContext(**calcs)

    def inspect_solves(self):
        """Collect the errors of every mesh."""
        rows, generic = [], []
        for n in self.ctx.n_list:
            calc = self.ctx[f'n_{n}']
            if not calc.is_finished_ok:
                self.report(f'HelmholtzBaseWorkChain<{calc.pk}> with N = {n} failed.')
                return self.exit_codes.ERROR_SUB_PROCESS_FAILED
            rows.append(study_row(calc.outputs.output_parameters.get_dict()))

            if self.inputs.pollution_pairing.value:
                calc = self.ctx[f'n_{n}_generic']
                if not calc.is_finished_ok:
                    self.report(f'HelmholtzBaseWorkChain<{calc.pk}> with N = {n} and generic stencils failed.')
                    return self.exit_codes.ERROR_SUB_PROCESS_FAILED
                generic.append(calc.outputs.output_parameters['errors']['linf'])

        self.ctx.rows = rows
        self.ctx.generic = generic
        return None

    def results(self):
        """
        Compute the convergence table and set it as output.
        """
        arguments = {'rows': orm.List(self.ctx.rows)}
        if self.ctx.generic:
            arguments['generic'] = orm.List(self.ctx.generic)
        self.out('convergence_table', create_convergence_table(**arguments))

        if self.ctx.reference_field is not None:
            self.out('reference_field', self.ctx.reference_field)
