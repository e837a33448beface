# -*- coding: utf-8 -*-
"""The shipped self checks pass on a working installation."""
import pytest

from helmholtz_fd.selfcheck import CHECKS, run_checks


@pytest.mark.parametrize(
    'name', ('special_functions', 'plane_wave_identity', 'zeroth_order_patterns', 'minimized_limit', 'truncation_order')
)
def test_check_passes(name):
    results = run_checks([name])
    assert results
    for result in results:
        assert result.passed, result.as_dict()


@pytest.mark.slow
def test_homogeneous_check():
    (result,) = run_checks(['homogeneous_problem'])
    assert result.passed
    assert result.value == 0.0


def test_every_pattern_is_checked():
    names = [result.name for result in CHECKS['zeroth_order_patterns']()]
    assert len(names) == len(set(names)) > 1
    assert all(name.startswith('zeroth_order_') for name in names)
