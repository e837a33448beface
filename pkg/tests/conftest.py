# -*- coding: utf-8 -*-
"""Fixtures shared by the test modules."""
import numpy as np
import pytest

from helmholtz_fd.config import config_from_preset
from helmholtz_fd.mesh import CoordinateSystem, build_regular_polar, build_stretched
from helmholtz_fd.pml import ComplexTransform, TransformKind, auto_alpha2
from helmholtz_fd.stencils.pde import PdeCoeffs


@pytest.fixture
def stretched_coeffs():
    """Factory of the coefficient data of a stretched layer between ``log 3`` and ``log 4``."""

    def _factory(kappa=5.0, source=None):
        s_star, s_max = float(np.log(3.0)), float(np.log(4.0))
        transform = ComplexTransform(TransformKind.LINEAR_S, s_star, s_max, alpha2=auto_alpha2(kappa, s_star, s_max))
        return PdeCoeffs(CoordinateSystem.STRETCHED, kappa, transform, source)

    return _factory


@pytest.fixture
def regular_mesh():
    return build_regular_polar(5.0, 2.0, 4.0, 32, 1.0)


@pytest.fixture
def stretched_mesh():
    return build_stretched(5.0, 2.0, 4.0, 32, 1.0)


@pytest.fixture
def smoke_config(tmp_path):
    return config_from_preset('smoke', {'outputs': {'dir': str(tmp_path)}})


@pytest.fixture
def homogeneous_config(tmp_path):
    return config_from_preset('homogeneous', {'outputs': {'dir': str(tmp_path)}})
