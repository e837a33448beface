# -*- coding: utf-8 -*-
"""
Calculation function to turn the errors of a mesh study into a convergence table.
"""
from aiida import orm
from aiida.engine import calcfunction

from ...verify import convergence_table


@calcfunction
def create_convergence_table(rows, generic=None):
    """
    Compute the convergence orders of a mesh study.

    :param rows: List of mappings with ``h``, ``kappa_h``, ``n_nodes``, ``err_linf`` and ``err_l2``.
    :param generic: optional List of the ``l_inf`` errors with generic stencils, ordered like ``rows``.

    :returns: Dict with the table under ``rows``.
    """
    table = convergence_table(rows.get_list(), generic.get_list() if generic is not None else None)
    return orm.Dict({'rows': table})
