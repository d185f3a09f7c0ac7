# Project imports
import os
import sys

sys.path.insert(0, os.path.abspath(os.path.dirname(os.path.dirname(os.path.dirname(os.path.realpath(__file__))))))

import numpy as np

from kirchwell.result import Result


def call_result_and_assert(result, expected, capsys):
    result.write()
    output = capsys.readouterr().out.strip()
    assert output == expected, output

def test_add_multiple_rows_with_success(capsys):
    expected = """****** SUMMARY ******
Metric      Count
--------  -------
Passed          2
Failed          0"""
    result = Result('eigen')
    result.append(('lambda1 error', True, 0.001, 0.005))
    result.append(('lambda2 error', True, 0.002, 0.005))
    call_result_and_assert(result, expected, capsys)
    assert result.passed is True

def test_add_multiple_rows_with_failure(capsys):
    result = Result('eigen')
    result.append(('lambda1 error', False, 0.02, 0.005))
    result.append(('gap', True, 0.1, 0.5))
    result.write()
    output = capsys.readouterr().out

    assert output.startswith('****** FAILED CRITERIA ******'), output
    assert 'Criterion' in output and 'lambda1 error' in output, output
    assert 'gap ' not in output, output
    assert output.strip().endswith("""Passed          1
Failed          1"""), output
    assert result.passed is False
    assert result.error_items == ['lambda1 error']

def test_extend_merges_suites():
    first = Result('grid')
    first.append(('a', True, 1, 2))
    second = Result('eigen')
    second.append(('b', False, 3, 2))
    merged = Result('all')
    merged.extend(first)
    merged.extend(second)

    assert (merged.success, merged.error) == (1, 1)
    assert [record['criterion'] for record in merged.records] == ['a', 'b']

def test_to_dict_plain_values():
    result = Result('constants')
    result.append(('S oracle', np.bool_(True), np.float64(0.123456789012345), 0.01))
    payload = result.to_dict()

    assert payload['suite'] == 'constants'
    assert payload['passed'] is True
    assert payload['criteria'][0]['measured'] == 0.123456789012
    assert type(payload['criteria'][0]['measured']) is float
