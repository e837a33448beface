# -*- coding: utf-8 -*-
"""Tests for the parsing helpers of the calculation plugin."""
import json

import pytest

from helmholtz_fd.parsers.helmholtz import classify_failure, parse_summary


def test_parse_summary_drops_echoed_configuration():
    text = json.dumps({'residual': 1e-15, 'max_abs': 1.2, 'config': {'name': 'smoke'}, 'files': {'field': 'x'}})
    assert parse_summary(text) == {'residual': 1e-15, 'max_abs': 1.2}


@pytest.mark.parametrize('text', ('[1, 2]', '{"rows": []}'))
def test_parse_summary_rejects_other_documents(text):
    with pytest.raises(ValueError):
        parse_summary(text)


def test_parse_summary_rejects_invalid_json():
    with pytest.raises(ValueError):
        parse_summary('not json')


@pytest.mark.parametrize(
    'stderr, label', (
        ('Error: SingularMatrix: sparse LU factorization failed', 'ERROR_NUMERICAL_FAILURE'),
        ('Error: InsufficientStencil: node 12 has only 5 usable mesh neighbors', 'ERROR_NUMERICAL_FAILURE'),
        ('Error: mesh.n: Value error, dyadic refinement needs an even n', 'ERROR_CONFIGURATION'),
        ('Error: unknown preset', 'ERROR_CONFIGURATION'),
    )
)
def test_classify_failure(stderr, label):
    assert classify_failure(f'some log line\n{stderr}\n')[0] == label


def test_classify_failure_uses_last_error():
    stderr = 'Error: mesh.n: invalid\nError: SingularMatrix: failed\n'
    assert classify_failure(stderr) == ('ERROR_NUMERICAL_FAILURE', 'SingularMatrix: failed')
    assert classify_failure('nothing went wrong\n') is None
