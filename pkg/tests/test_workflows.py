# -*- coding: utf-8 -*-
"""Tests for the behaviour shared by the workchains."""
from unittest.mock import MagicMock

from aiida import orm
import pytest

from helmholtz_fd.workflows.base import HelmholtzBaseWorkChain
from helmholtz_fd.workflows.cleanup import CleanWorkdirMixin, clean_remote_folders
from helmholtz_fd.workflows.convergence import HelmholtzConvergenceWorkChain
from helmholtz_fd.workflows.pml_sweep import HelmholtzPmlSweepWorkChain


def _calculation(pk, error=None):
    node = MagicMock(spec=orm.CalcJobNode)
    node.pk = pk
    node.outputs.remote_folder._clean.side_effect = error
    return node


@pytest.mark.parametrize(
    'workchain', (HelmholtzBaseWorkChain, HelmholtzConvergenceWorkChain, HelmholtzPmlSweepWorkChain)
)
def test_workchains_share_cleanup(workchain):
    assert issubclass(workchain, CleanWorkdirMixin)
    assert workchain.on_terminated is CleanWorkdirMixin.on_terminated


def test_clean_remote_folders():
    cleaned = _calculation(11)
    missing = _calculation(12, KeyError('remote_folder'))
    unreachable = _calculation(13, OSError('connection closed'))
    workflow = MagicMock(spec=orm.WorkChainNode)

    assert clean_remote_folders([cleaned, workflow, missing, unreachable]) == [11]
    cleaned.outputs.remote_folder._clean.assert_called_once_with()
    unreachable.outputs.remote_folder._clean.assert_called_once_with()
