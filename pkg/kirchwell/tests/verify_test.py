# Project imports
import os
import sys

import mock
import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.dirname(os.path.dirname(os.path.dirname(os.path.realpath(__file__))))))

from kirchwell.config import VERIFY_DEFAULTS
from kirchwell.continuation import CSV_COLUMNS
from kirchwell.errors import ProblemError, SolverError
from kirchwell.result import Result
from kirchwell.solvers import Census, SolveResult
from kirchwell.verify import (SUITES, _census_rows, _fold_rows, _right_of_lambda1,
                             verify_suite)


def test_unknown_suite():
    with pytest.raises(ProblemError):
        verify_suite('nope', options=dict(VERIFY_DEFAULTS))

def test_suite_names():
    assert SUITES == ('grid', 'eigen', 'functional', 'constants', 'thm1', 'thm2', 'thm3', 'branch')

def test_grid_suite_passes():
    result = verify_suite('grid', options=dict(VERIFY_DEFAULTS))

    assert result.suite == 'grid'
    assert result.passed, result.records
    assert result.success == 4, result.records

@mock.patch('kirchwell.verify._suite_grid')
def test_suite_error_is_a_failed_row(mock_suite):
    mock_suite.side_effect = SolverError('did not converge')
    result = verify_suite('grid', options=dict(VERIFY_DEFAULTS))

    assert not result.passed
    assert result.records[0]['criterion'] == 'grid: SolverError'
    assert result.records[0]['measured'] == 'did not converge'

@mock.patch('kirchwell.verify.SUITES', ('grid',))
def test_all_runs_every_suite():
    result = verify_suite('all', 5, dict(VERIFY_DEFAULTS))

    assert result.suite == 'all'
    assert result.passed
    assert result.success == 4

def _rows(*branches):
    # Each branch is a list of (lambda, norm_mu, fold_flag).
    rows = []
    for branch_id, branch in enumerate(branches):
        for lam, norm, fold in branch:
            rows.append(dict(zip(CSV_COLUMNS, (1.0, lam, norm, 0.0, branch_id, int(fold), 1e-10))))
    return rows

def test_fold_rows_single_fold_per_branch():
    result = Result('branch')
    rows = _rows([(1.0, 0.2, 0), (1.5, 0.4, 0), (1.4, 0.6, 1), (1.1, 0.9, 0)],
                 [(1.0, 0.9, 0), (1.5, 0.6, 0), (1.4, 0.4, 1), (1.2, 0.3, 0)])
    found = _fold_rows(result, 'at a=2a0', rows, 2.0)

    assert result.passed, result.records
    assert found == [1.4, 1.4]

def test_fold_rows_rejects_zig_zag():
    result = Result('branch')
    rows = _rows([(1.0, 0.2, 0), (1.5, 0.4, 0), (1.4, 0.5, 1), (1.6, 0.6, 1), (1.3, 0.8, 1)])
    _fold_rows(result, 'at a=2a0', rows, 2.0)

    assert not result.passed
    assert result.error_items == ['one fold per branch at a=2a0']

def test_fold_rows_rejects_fold_above_lambda1():
    result = Result('branch')
    _fold_rows(result, 'at a=4a0', _rows([(1.0, 0.2, 0), (2.5, 0.4, 0), (2.4, 0.6, 1)]), 2.0)

    assert result.error_items == ['fold below lambda1 at a=4a0']

def test_fold_rows_needs_a_fold():
    result = Result('branch')
    _fold_rows(result, 'at a=2a0', _rows([(1.0, 0.2, 0), (1.5, 0.4, 0)]), 2.0)

    assert result.error == 2

def test_right_of_lambda1_uses_lower_branch_before_fold():
    result = Result('branch')
    # Only the upper branch and the lower branch after its fold reach lambda > 2.
    rows = _rows([(1.0, 1.5, 0), (2.5, 1.8, 0)],
                 [(1.0, 0.1, 0), (1.8, 0.3, 0), (1.7, 0.5, 1), (2.6, 0.9, 0)])
    _right_of_lambda1(result, rows, 2.0)

    assert not result.passed
    assert result.records[0]['measured'] == 1.8

def test_right_of_lambda1_passes():
    result = Result('branch')
    rows = _rows([(1.0, 0.1, 0), (2.2, 0.3, 0), (2.1, 0.5, 1)])
    _right_of_lambda1(result, rows, 2.0)

    assert result.passed, result.records

def _solution(energy, extras=None):
    field = np.ones(3)
    return SolveResult(field, energy, 1e-10, 1.0, 'exterior-min', 1, True, 0.0, 1.0, 1.0, 1000.0, extras)

def test_census_rows_flag_exterior_below_bound():
    result = Result('thm2')
    census = Census([_solution(0.2), _solution(-3.0, {'lower_bound': -2.1, 'lower_bound_ok': False})])
    _census_rows(result, 'lambda=0.5 lambda1', census, 2)

    assert result.error_items == ['lambda=0.5 lambda1: exterior minimum above -1.05 C']
    assert result.records[-1]['measured'] == -3.0

def test_census_rows_without_bound():
    result = Result('thm1')
    _census_rows(result, 'lambda=0.9 lambda1', Census([_solution(0.2)]), 1, '+')

    assert result.passed, result.records
    assert len(result.records) == 3
