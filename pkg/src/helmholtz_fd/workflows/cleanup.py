# -*- coding: utf-8 -*-
"""Cleaning of the remote folders left by the calculations of a workchain."""
from aiida import orm


def clean_remote_folders(descendants) -> list:
    """Clean the remote folder of every calculation among ``descendants``, returning the pks that were cleaned."""
    cleaned = []
    for node in descendants:
        if not isinstance(node, orm.CalcJobNode):
            continue
        try:
            node.outputs.remote_folder._clean()  # pylint: disable=protected-access
            cleaned.append(node.pk)
        except (IOError, OSError, KeyError):
            pass
    return cleaned


class CleanWorkdirMixin:
    """
    Cleans the working directories of the called calculations on termination when `clean_workdir=True`.
    """

    def on_terminated(self):
        super().on_terminated()

        if self.inputs.clean_workdir.value is False:
            self.report('remote folders will not be cleaned')
            return

        cleaned = clean_remote_folders(self.node.called_descendants)
        if cleaned:
            self.report(f"cleaned remote folders of calculations: {' '.join(map(str, cleaned))}")
