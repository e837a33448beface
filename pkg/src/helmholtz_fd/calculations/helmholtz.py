# -*- coding: utf-8 -*-
"""`CalcJob` running ``helmholtz-fd run`` on one experiment."""
import json

from aiida import orm
from aiida.common.datastructures import CalcInfo, CodeInfo
from aiida.engine import CalcJob
import pydantic

from ..config import ExperimentConfig


def validate_parameters(value, _):
    """Validate the experiment mapping against the configuration schema."""
    if value is None:
        return None
    try:
        ExperimentConfig.model_validate(value.get_dict())
    except (pydantic.ValidationError, ValueError) as exception:
        return f'invalid experiment parameters: {exception}'
    return None


class HelmholtzCalculation(CalcJob):
    """
    Calculation job solving one exterior Helmholtz experiment with the
    ``helmholtz-fd`` command line interface.
    """

    # Default input and output files
    _DEFAULT_INPUT_FILE = 'experiment.json'
    _DEFAULT_OUTPUT_FILE = 'aiida.out'
    _DEFAULT_ERROR_FILE = 'aiida.err'
    _DEFAULT_SUMMARY_FILE = 'summary.json'
    _DEFAULT_FIELD_FILE = 'field.npz'
    _DEFAULT_REFERENCE_FILE = 'reference.npz'

    @classmethod
    def define(cls, spec):
        """Define the process specification."""
        # yapf: disable
        super().define(spec)
        spec.input(
            'parameters',
            valid_type=orm.Dict,
            required=True,
            validator=validate_parameters,
            help='The experiment configuration, see ``helmholtz_fd.config.ExperimentConfig``.'
        )
        spec.input(
            'reference',
            valid_type=orm.SinglefileData,
            required=False,
            help=(
                'Optional field archive of a finer solve used as the reference '
                'of the error report.'
            )
        )
        spec.input(
            'settings',
            valid_type=orm.Dict,
            required=False,
            help=(
                'Optional settings: ``CMDLINE`` is a list of extra command line '
                'arguments of the ``run`` verb.'
            )
        )
        spec.input(
            'metadata.options.input_filename',
            valid_type=str,
            default=cls._DEFAULT_INPUT_FILE
        )
        spec.input(
            'metadata.options.output_filename',
            valid_type=str,
            default=cls._DEFAULT_OUTPUT_FILE
        )
        spec.input(
            'metadata.options.parser_name',
            valid_type=str,
            default='helmholtz_fd.solve'
        )

        spec.output(
            'output_parameters',
            valid_type=orm.Dict,
            help='The run summary.'
        )
        spec.output(
            'field',
            valid_type=orm.SinglefileData,
            required=False,
            help='Nodal values with their lattice indices.'
        )

        spec.default_output_node = 'output_parameters'

        spec.exit_code(300, 'ERROR_MISSING_OUTPUT_FILES',
            message='The summary file was not retrieved.')
        spec.exit_code(301, 'ERROR_CONFIGURATION',
            message='The experiment configuration was rejected: {message}')
        spec.exit_code(302, 'ERROR_NUMERICAL_FAILURE',
            message='A numerical stage failed: {message}')
        spec.exit_code(303, 'ERROR_RESIDUAL_TOO_LARGE',
            message='The relative residual {residual} of the linear solve exceeds its tolerance.')

        # yapf: enable

    def prepare_for_submission(self, folder):
        """
        Write the experiment file and return the `CalcInfo` of a ``run``.

        The outputs are written to the working directory; a reference field
        input is copied next to the experiment and selected as the reference.

        :param folder: a sandbox folder to temporarily write files on disk.

        :return: `aiida.common.datastructures.CalcInfo` instance.
        """
        settings = self.inputs.settings.get_dict() if 'settings' in self.inputs else {}
        parameters = self.inputs.parameters.get_dict()

        outputs = parameters.setdefault('outputs', {})
        outputs['dir'] = '.'
        outputs['field_npz'] = True

        local_copy_list = []
        if 'reference' in self.inputs:
            reference = self.inputs.reference
            local_copy_list.append((reference.uuid, reference.filename, self._DEFAULT_REFERENCE_FILE))
            parameters['reference'] = {'kind': 'file', 'path': self._DEFAULT_REFERENCE_FILE}

        with folder.open(self._DEFAULT_INPUT_FILE, 'w') as handle:
            json.dump(parameters, handle, indent=2)

        codeinfo = CodeInfo()
        codeinfo.cmdline_params = ['run', '--config', self._DEFAULT_INPUT_FILE] + list(settings.get('CMDLINE', []))
        codeinfo.stdout_name = self._DEFAULT_OUTPUT_FILE
        codeinfo.stderr_name = self._DEFAULT_ERROR_FILE
        codeinfo.code_uuid = self.inputs.code.uuid

        calcinfo = CalcInfo()
        calcinfo.codes_info = [codeinfo]
        calcinfo.local_copy_list = local_copy_list
        calcinfo.remote_copy_list = []
        calcinfo.retrieve_list = [
            self._DEFAULT_OUTPUT_FILE,
            self._DEFAULT_ERROR_FILE,
            self._DEFAULT_SUMMARY_FILE,
            self._DEFAULT_FIELD_FILE,
        ]

        return calcinfo
