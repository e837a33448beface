# -*- coding: utf-8 -*-
"""Named experiment presets shipped with the package."""
import pathlib

from importlib_resources import files

from ..exceptions import ConfigurationError
from ..workflows.protocols.utils import load_yaml, merged_entry

__all__ = ('presets_filepath', 'available_presets', 'default_preset', 'preset_inputs')


def presets_filepath() -> pathlib.Path:
    return files(__name__) / 'experiments.yaml'


def _load() -> dict:
    return load_yaml(presets_filepath())


def available_presets() -> dict:
    """Return the presets with their descriptions."""
    return {name: {'description': values['description']} for name, values in _load()['presets'].items()}


def default_preset() -> str:
    return _load()['default_preset']


def preset_inputs(name: str | None = None, overrides: dict | None = None) -> dict:
    """Return the configuration mapping of a preset merged with ``overrides``.

    :raises ConfigurationError: for an unknown preset.
    """
    data = _load()
    name = name or data['default_preset']
    try:
        inputs = merged_entry(data, 'presets', 'default_preset', name, overrides)
    except ValueError as exception:
        raise ConfigurationError(str(exception)) from exception
    inputs.setdefault('name', name)
    inputs.setdefault('description', data['presets'][name]['description'])
    return inputs
