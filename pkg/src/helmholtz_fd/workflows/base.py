# -*- coding: utf-8 -*-
"""Base workchain to run a Helmholtz calculation."""
from aiida import orm
from aiida.common import AttributeDict
from aiida.engine import BaseRestartWorkChain, ProcessHandlerReport, process_handler, while_
from aiida.plugins import CalculationFactory

from ..presets import preset_inputs
from .cleanup import CleanWorkdirMixin
from .protocols.utils import ProtocolMixin, recursive_merge

HelmholtzCalculation = CalculationFactory('helmholtz_fd.solve')

DELTA_FLOOR_FACTOR = 1e4
DELTA_FLOOR_LIMIT = 1e-6


class HelmholtzBaseWorkChain(CleanWorkdirMixin, ProtocolMixin, BaseRestartWorkChain):
    """
    Workchain to run a Helmholtz calculation with automated error handling
    and restarts.

    A numerical failure is retried with a larger regularization floor of the
    Gram systems, then with generic stencils only.
    """

    _process_class = HelmholtzCalculation

    @classmethod
    def define(cls, spec):

        super().define(spec)
        spec.expose_inputs(
            HelmholtzCalculation,
            namespace='helmholtz',
        )
        spec.input(
            'clean_workdir',
            valid_type=orm.Bool,
            default=lambda: orm.Bool(False),
            help='Whether to clean all related work folders.'
        )

        spec.outline(
            cls.setup,
            while_(cls.should_run_process)(
                cls.run_process,
                cls.inspect_process,
            ),
            cls.results,
        )

        spec.expose_outputs(HelmholtzCalculation)

        spec.exit_code(
            310,
            'ERROR_UNRECOVERABLE_FAILURE',
            message='The calculation failed with generic stencils and the largest regularization floor.'
        )

    @classmethod
    def get_protocol_filepath(cls):
        from importlib_resources import files

        from .protocols import helmholtz as protocols
        return files(protocols) / 'base.yaml'

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
            Name of the experiment preset, the default preset if not given.
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

        # The protocol tunes the method, the preset describes the experiment.
        parameters = recursive_merge(preset_inputs(preset), inputs['helmholtz'].get('parameters', {}))
        metadata = inputs['helmholtz'].get('metadata', {})
        if options:
            metadata['options'] = recursive_merge(metadata.get('options', {}), options)

        builder = cls.get_builder()

        builder.helmholtz.code = code
        builder.helmholtz.parameters = orm.Dict(parameters)
        builder.helmholtz.metadata = metadata
        if 'max_iterations' in inputs:
            builder.max_iterations = orm.Int(inputs['max_iterations'])
        builder.clean_workdir = orm.Bool(inputs['clean_workdir'])

        return builder

    def setup(self):
        """
        Call the `setup` of the `BaseRestartWorkChain` and then create the
        inputs dictionary in `self.ctx.inputs`.

        This `self.ctx.inputs` dictionary will be used by the
        `BaseRestartWorkChain` to submit the calculations in the internal loop.
        """
        super().setup()
        self.ctx.inputs = AttributeDict(self.exposed_inputs(HelmholtzCalculation, 'helmholtz'))
        self.ctx.parameters = self.inputs.helmholtz.parameters.get_dict()

    def prepare_process(self):
        """Put the current parameters on the inputs of the next calculation."""
        self.ctx.inputs.parameters = orm.Dict(self.ctx.parameters)

    def run_process(self):
        self.prepare_process()
        return super().run_process()

    @process_handler(priority=500, exit_codes=[
        HelmholtzCalculation.exit_codes.ERROR_NUMERICAL_FAILURE,
        HelmholtzCalculation.exit_codes.ERROR_RESIDUAL_TOO_LARGE,
    ])
    def handle_numerical_failure(self, calculation):
        """Raise the regularization floor of the Gram systems, then switch off pollution minimization."""
        method = self.ctx.parameters.setdefault('method', {})
        floor = method.get('delta_floor', 1e-14)
        if method.get('pollution', True) and floor * DELTA_FLOOR_FACTOR <= DELTA_FLOOR_LIMIT:
            method['delta_floor'] = floor * DELTA_FLOOR_FACTOR
            self.report(
                f'{calculation.process_label}<{calculation.pk}> failed numerically, '
                f'restarting with delta_floor = {method["delta_floor"]:.0e}'
            )
            return ProcessHandlerReport(True)
        if method.get('pollution', True):
            method['pollution'] = False
            self.report(
                f'{calculation.process_label}<{calculation.pk}> failed numerically, '
                'restarting with generic stencils'
            )
            return ProcessHandlerReport(True)
        self.report(f'{calculation.process_label}<{calculation.pk}> failed with generic stencils, giving up')
        return ProcessHandlerReport(True, self.exit_codes.ERROR_UNRECOVERABLE_FAILURE)
