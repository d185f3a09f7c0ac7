# Project imports
import os
import sys

import mock
import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.dirname(os.path.dirname(os.path.dirname(os.path.realpath(__file__))))))

from kirchwell.eigen import (SCAN_COLUMNS, lambda1_mu, lambda1_omega,
                             lambda2_omega, mu_convergence_scan, mu_pairs,
                             omega_pairs)
from kirchwell.errors import ConditionError, SolverError
from kirchwell.grid import GridSpec, build_grid
from kirchwell.tests import helper


def test_lambda1_interval():
    grid = build_grid(GridSpec(1, 0.5, 201))
    pair = lambda1_omega(grid, np.ones(grid.size))

    helper.assert_close(pair.value, np.pi ** 2, 5e-3)
    assert pair.kind == 'lambda1_omega', pair.kind

def test_lambda2_interval():
    grid = build_grid(GridSpec(1, 0.5, 201))
    ones = np.ones(grid.size)
    first = lambda1_omega(grid, ones)
    second = lambda2_omega(grid, ones, first.field)

    helper.assert_close(second.value, 4 * np.pi ** 2, 5e-3)

@mock.patch.dict('kirchwell.settings.tolerances', {'eigen': -1.0})
def test_residual_above_tolerance_is_an_error():
    grid = build_grid(GridSpec(1, 0.5, 21))
    with pytest.raises(SolverError):
        lambda1_omega(grid, np.ones(grid.size))

def test_lambda1_field_is_positive_and_normalized():
    grid = build_grid(GridSpec(1, 0.5, 101))
    pair = lambda1_omega(grid, np.ones(grid.size))

    assert np.all(pair.field > 0), pair.field.min()
    helper.assert_close(float(np.dot(grid.weights, pair.field ** 2)), 1.0, 1e-10)
    helper.assert_close(pair.f_mass, 1.0, 1e-10)

def test_lambda1_square():
    grid = build_grid(GridSpec(2, 0.5, 41))
    pair = lambda1_omega(grid, np.ones(grid.size))

    helper.assert_close(pair.value, 2 * np.pi ** 2, 5e-3)

def test_lambda1_on_subdomain():
    grid = build_grid(GridSpec(1, 1.0, 201))
    omega = np.abs(grid.points[:, 0]) < 0.5
    pair = lambda1_omega(grid, np.ones(grid.size), omega)

    assert np.all(pair.field[~omega] == 0.0)
    # Omega is the open interval (-0.5, 0.5)
    helper.assert_close(pair.value, np.pi ** 2, 0.05)

def test_lambda1_without_positive_weight():
    grid = build_grid(GridSpec(1, 0.5, 51))
    with pytest.raises(ConditionError):
        lambda1_omega(grid, -np.ones(grid.size))

def test_lambda1_with_indefinite_weight():
    grid = build_grid(GridSpec(1, 0.5, 101))
    f = np.where(grid.points[:, 0] < 0, 1.0, -1.0)
    pair = lambda1_omega(grid, f)

    assert pair.value > np.pi ** 2, pair.value
    helper.assert_close(float(np.dot(grid.weights * f, pair.field ** 2)), 1.0, 1e-10)

def test_lambda2_is_orthogonal_to_phi1():
    spec = helper.small_problem('TP-BALL-P5')
    grid = spec.build_grid()
    first, second = omega_pairs(grid, spec)

    assert second.value > first.value, (first.value, second.value)
    assert abs(second.orth) < 1e-8, second.orth

def test_lambda1_mu_below_lambda1():
    spec = helper.small_problem('TP-BALL-P5')
    grid = spec.build_grid()
    first = omega_pairs(grid, spec)[0]
    first_mu = mu_pairs(grid, spec)[0]

    assert first_mu.value <= first.value * (1.0 + 1e-8), (first_mu.value, first.value)
    assert first_mu.value > 0.5 * first.value, (first_mu.value, first.value)

def test_mu_pairs_are_cached():
    spec = helper.small_problem('TP-BALL-P5')
    grid = spec.build_grid()

    assert mu_pairs(grid, spec) is mu_pairs(grid, spec)
    assert omega_pairs(grid, spec) is omega_pairs(grid, spec)

def test_lambda1_mu_override():
    spec = helper.small_problem('TP-BALL-P5')
    grid = spec.build_grid()
    low = lambda1_mu(grid, spec, mu=1.0)

    assert low.value < mu_pairs(grid, spec)[0].value, low.value

def test_mu_convergence_scan():
    spec = helper.small_problem('TP-BALL-P5')
    rows = mu_convergence_scan(spec, [1.0, 10.0, 100.0, 1000.0])
    values = [row['lambda1_mu'] for row in rows]
    gaps = [row['gap1'] for row in rows]

    assert list(rows[0].keys()) == list(SCAN_COLUMNS), rows[0].keys()
    assert all(b >= a * (1.0 - 1e-9) for a, b in zip(values, values[1:])), values
    assert all(gap >= -1e-8 * values[-1] for gap in gaps), gaps
    assert gaps[-1] < gaps[0], gaps

def test_eigen_pair_to_dict():
    grid = build_grid(GridSpec(1, 0.5, 51))
    payload = lambda1_omega(grid, np.ones(grid.size)).to_dict()

    assert sorted(payload.keys()) == ['f_mass', 'kind', 'orth', 'residual', 'value'], payload
