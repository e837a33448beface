# -*- coding: utf-8 -*-
"""Tests for the calculation plugin that do not need a profile."""
from helmholtz_fd.calculations.helmholtz import HelmholtzCalculation, validate_parameters
from helmholtz_fd.presets import preset_inputs


class _Mapping:
    """Stands in for a stored ``Dict`` node in the port validator."""

    def __init__(self, value):
        self.value = value

    def get_dict(self):
        return self.value


def test_exit_codes():
    exit_codes = HelmholtzCalculation.spec().exit_codes
    assert exit_codes.ERROR_MISSING_OUTPUT_FILES.status == 300
    assert exit_codes.ERROR_CONFIGURATION.status == 301
    assert exit_codes.ERROR_NUMERICAL_FAILURE.status == 302
    assert exit_codes.ERROR_RESIDUAL_TOO_LARGE.status == 303
    assert 'SingularMatrix' in exit_codes.ERROR_NUMERICAL_FAILURE.format(message='SingularMatrix').message


def test_ports():
    spec = HelmholtzCalculation.spec()
    assert spec.inputs['parameters'].required
    assert not spec.inputs['reference'].required
    assert spec.inputs['metadata']['options']['parser_name'].default == 'helmholtz_fd.solve'
    assert set(spec.outputs) >= {'output_parameters', 'field'}


def test_validate_parameters():
    assert validate_parameters(None, None) is None
    assert validate_parameters(_Mapping(preset_inputs('smoke')), None) is None
    message = validate_parameters(_Mapping(preset_inputs('smoke', {'mesh': {'n': 47}})), None)
    assert message.startswith('invalid experiment parameters')
