# -*- coding: utf-8 -*-
"""
Utilities to manipulate the workflow input protocols and the experiment presets.
"""
import collections.abc
import pathlib
from typing import Optional, Union

import yaml


class ProtocolMixin:
    """
    Builds the inputs of a workchain from one protocol of its YAML file.
    """

    @classmethod
    def get_protocol_filepath(cls) -> pathlib.Path:
        """Path of the protocol file, set by every workchain."""
        raise NotImplementedError

    @classmethod
    def get_default_protocol(cls) -> str:
        return cls._load_protocol_file()['default_protocol']

    @classmethod
    def get_available_protocols(cls) -> dict:
        """Map protocol names to their ``description``."""
        data = cls._load_protocol_file()
        return {name: {'description': values['description']} for name, values in data['protocols'].items()}

    @classmethod
    def get_protocol_inputs(
        cls,
        protocol: Optional[str] = None,
        overrides: Union[dict, pathlib.Path, None] = None,
    ) -> dict:
        """Inputs of the workchain for ``protocol``.

        :param protocol: name of the protocol, the default protocol of the file when omitted.
        :param overrides: mapping, or YAML file, nested like the input namespace of the workchain. Its values win
            over the protocol.
        :return: mapping of workchain inputs.
        """
        return merged_entry(cls._load_protocol_file(), 'protocols', 'default_protocol', protocol, overrides)

    @classmethod
    def _load_protocol_file(cls) -> dict:
        return load_yaml(cls.get_protocol_filepath())


def load_yaml(path) -> dict:
    with pathlib.Path(path).open() as file:
        return yaml.safe_load(file)


def merged_entry(data: dict, section: str, default_key: str, name: Optional[str] = None,
                 overrides: Union[dict, pathlib.Path, None] = None) -> dict:
    """Merge the entry ``name`` of ``data[section]`` on top of ``data['default_inputs']``, then ``overrides``.

    :raises ValueError: if ``name`` is not an entry of the section.
    """
    name = name or data[default_key]
    if name not in data[section]:
        raise ValueError(f'`{name}` is not a valid entry of `{section}`, choose from {sorted(data[section])}.')

    inputs = recursive_merge(data.get('default_inputs', {}), data[section][name])
    inputs.pop('description', None)

    if isinstance(overrides, pathlib.Path):
        overrides = load_yaml(overrides)
    return recursive_merge(inputs, overrides) if overrides else inputs


def recursive_merge(left: dict, right: dict) -> dict:
    """Nested merge of two mappings, values of ``right`` win.

    Neither argument is modified.
    """
    merged = dict(left)
    for key, value in right.items():
        current = merged.get(key)
        if isinstance(current, collections.abc.Mapping) and isinstance(value, collections.abc.Mapping):
            merged[key] = recursive_merge(current, value)
        else:
            merged[key] = value
    return merged
