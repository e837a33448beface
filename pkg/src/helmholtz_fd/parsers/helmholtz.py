# -*- coding: utf-8 -*-
"""Parser of ``helmholtz_fd.solve`` calculations."""
import json

from aiida import orm
from aiida.common import exceptions
from aiida.engine import ExitCode
from aiida.parsers import Parser

from .. import exceptions as errors
from ..calculations.helmholtz import HelmholtzCalculation


def _numerical_names() -> set:
    names, pending = set(), [errors.NumericalError]
    while pending:
        cls = pending.pop()
        names.add(cls.__name__)
        pending.extend(cls.__subclasses__())
    return names


def parse_summary(text: str) -> dict:
    """Return the summary written by a run, without the echoed configuration.

    :raises ValueError: if the text is not a summary.
    """
    summary = json.loads(text)
    if not isinstance(summary, dict) or 'residual' not in summary:
        raise ValueError('the file does not contain a run summary')
    summary.pop('config', None)
    summary.pop('files', None)
    return summary


def classify_failure(stderr: str):
    """Name of the exit code matching the error printed by the command line interface, ``None`` if there is none."""
    numerical = _numerical_names()
    for line in reversed(stderr.splitlines()):
        if not line.startswith('Error: '):
            continue
        name = line[len('Error: '):].split(':', 1)[0]
        return ('ERROR_NUMERICAL_FAILURE' if name in numerical else 'ERROR_CONFIGURATION'), line[len('Error: '):]
    return None


class HelmholtzParser(Parser):
    """
    Parser for the summary and the field archive of a run.
    """

    def __init__(self, node):
        """
        Initialize parser instance and check that node passed is
        from a Helmholtz calculation.
        """
        super().__init__(node)
        if not issubclass(node.process_class, HelmholtzCalculation):
            raise exceptions.ParsingError('Can only parse Helmholtz calculations')

    def parse(self, **kwargs):
        """
        Parse the retrieved files.
        """
        retrieved = self.retrieved
        files = retrieved.base.repository.list_object_names()
        summary_filename = HelmholtzCalculation._DEFAULT_SUMMARY_FILE
        field_filename = HelmholtzCalculation._DEFAULT_FIELD_FILE
        error_filename = HelmholtzCalculation._DEFAULT_ERROR_FILE

        if summary_filename not in files:
            if error_filename in files:
                failure = classify_failure(retrieved.base.repository.get_object_content(error_filename))
                if failure is not None:
                    label, message = failure
                    self.logger.error(message)
                    return self.exit_codes[label].format(message=message)
            self.logger.error(f"Found files '{files}', expected to find '{summary_filename}'")
            return self.exit_codes.ERROR_MISSING_OUTPUT_FILES

        self.logger.info(f"Parsing '{summary_filename}'")
        try:
            summary = parse_summary(retrieved.base.repository.get_object_content(summary_filename))
        except ValueError as exception:
            self.logger.error(f'cannot read {summary_filename}: {exception}')
            return self.exit_codes.ERROR_MISSING_OUTPUT_FILES

        self.out('output_parameters', orm.Dict(summary))

        if field_filename in files:
            with retrieved.base.repository.open(field_filename, 'rb') as handle:
                self.out('field', orm.SinglefileData(handle, filename=field_filename))

        if summary.get('residual_flagged'):
            return self.exit_codes.ERROR_RESIDUAL_TOO_LARGE.format(residual=f'{summary["residual"]:.2e}')

        return ExitCode(0)
