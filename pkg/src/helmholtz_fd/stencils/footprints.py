# -*- coding: utf-8 -*-
"""Reference stencils, as integer offsets in units of the local mesh size.

Offsets are ``(first coordinate, theta)`` pairs. The center ``(0, 0)`` is
always the first row so that coefficient vectors can be normalized on
index 0.
"""
import enum

import numpy as np

__all__ = ('Footprint', 'offsets', 'ZEROTH_ORDER', 'UNDETERMINED')


class Footprint(enum.Enum):
    INTERIOR = 'interior'
    INTERIOR_PML = 'interior_pml'
    INTERFACE = 'interface'
    DANGLING_S = 'dangling_s'
    DANGLING_THETA = 'dangling_theta'
    AUXILIARY = 'auxiliary'
    AUXILIARY_PML = 'auxiliary_pml'


def _centered(points) -> np.ndarray:
    points = sorted(set(points) - {(0, 0)})
    return np.array([(0, 0)] + points, dtype=int)


_COMPACT = [(i, k) for i in (-1, 0, 1) for k in (-1, 0, 1)]
_DANGLING_S = [(2 * a, b) for a in (-1, 1) for b in (-1, 1)] + [(a, 2 * b) for a in (-1, 1) for b in (-1, 1)]
_DANGLING_S += [(-1, 0), (1, 0), (0, -3), (0, 3), (0, 0)]
_AUXILIARY = [(3 * a, b) for a in (-1, 1) for b in (-1, 1)] + [(a, 3 * b) for a in (-1, 1) for b in (-1, 1)]
_AUXILIARY += [(a, b) for a in (-1, 1) for b in (-1, 1)] + [(0, 0)]

_OFFSETS = {
    Footprint.INTERIOR: _centered(_COMPACT),
    Footprint.INTERIOR_PML: _centered(_COMPACT + [(0, -2), (0, 2)]),
    Footprint.INTERFACE: _centered([(i, k) for i in (-1, 0, 1) for k in range(-2, 3)]),
    Footprint.DANGLING_S: _centered(_DANGLING_S),
    Footprint.DANGLING_THETA: _centered([(k, i) for i, k in _DANGLING_S]),
    Footprint.AUXILIARY: _centered(_AUXILIARY),
    Footprint.AUXILIARY_PML: _centered(_AUXILIARY + [(0, -2), (0, 2)]),
}


# Footprints whose leading order conditions leave more than one stencil, fixed by minimization.
UNDETERMINED = frozenset({Footprint.INTERFACE, Footprint.AUXILIARY_PML})


def offsets(footprint: Footprint) -> np.ndarray:
    """Return a copy of the ``(n, 2)`` integer offsets of ``footprint``, center first."""
    return _OFFSETS[footprint].copy()


def _symmetric(values: dict) -> dict:
    """Expand ``{(|a|, |b|): c}`` over all sign combinations."""
    expanded = {}
    for (a, b), value in values.items():
        for sa in (-1, 1):
            for sb in (-1, 1):
                expanded[(sa * a, sb * b)] = value
    return expanded


# Zeroth-order coefficients of the Laplace form, unique up to a multiple.
ZEROTH_ORDER = {
    Footprint.INTERIOR: _symmetric({(1, 1): -1, (1, 0): -4, (0, 1): -4, (0, 0): 20}),
    Footprint.DANGLING_S: _symmetric({(2, 1): -33, (1, 2): -75, (1, 0): -378, (0, 3): -14, (0, 0): 1216}),
    Footprint.DANGLING_THETA: _symmetric({(1, 2): -33, (2, 1): -75, (0, 1): -378, (3, 0): -14, (0, 0): 1216}),
    Footprint.AUXILIARY: _symmetric({(3, 1): -1, (1, 3): -1, (1, 1): -14, (0, 0): 64}),
}
