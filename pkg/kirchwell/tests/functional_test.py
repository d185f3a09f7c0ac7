# Project imports
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.dirname(os.path.dirname(os.path.dirname(os.path.realpath(__file__))))))

from kirchwell.errors import GridMismatchError
from kirchwell.functional import (Operators, directional_derivative, energy,
                                  gradient_field, nehari, power,
                                  residual_norm)
from kirchwell.tests import helper


def test_power():
    values = power(np.array([-2.0, 0.0, 3.0]), 3.0)

    assert np.allclose(values, [8.0, 0.0, 27.0]), values

def test_power_fractional_at_zero():
    values = power(np.zeros(3), 0.5)

    assert np.all(values == 0.0), values

def test_energy_of_zero():
    spec = helper.small_problem('TP-BALL-P3-NEG')
    grid = spec.build_grid()

    assert energy(grid, spec, np.zeros(grid.size)).total == 0.0

def test_energy_breakdown():
    spec = helper.small_problem('TP-BALL-P5', lam=2.0, a=0.5)
    grid = spec.build_grid()
    ops = Operators.for_problem(grid, spec)
    u = helper.random_field(grid, 3)
    breakdown = ops.energy(u)
    data = spec.nodal(grid)
    D = float(np.dot(u, grid.stiffness.dot(u)))
    expected = 0.125 * D ** 2 + 0.5 * ops.inner_mu(u, u) - \
        float(np.dot(grid.weights, data.f * u * u)) - \
        float(np.dot(grid.weights, data.g * np.abs(u) ** 5)) / 5.0

    helper.assert_close(breakdown.total, expected, 1e-12)
    assert sorted(breakdown.to_dict()) == ['dirichlet4', 'f_term', 'g_term', 'mu_half', 'total']

def test_energy_depends_on_absolute_value():
    spec = helper.small_problem('TP-BALL-P3-NEG', lam=2.0)
    grid = spec.build_grid()
    ops = Operators.for_problem(grid, spec)
    v = helper.random_field(grid, 4)

    helper.assert_close(ops.energy(-v).total, ops.energy(v).total, 1e-12)
    helper.assert_close(ops.energy(np.abs(-v)).total, ops.energy(-v).total, 1e-12)

    # Across a sign change only the gradient terms can drop.
    u = helper.random_field(grid, 5, positive=False)
    signed, folded = ops.energy(u), ops.energy(np.abs(u))
    helper.assert_close(folded.f_term, signed.f_term, 1e-12)
    helper.assert_close(folded.g_term, signed.g_term, 1e-12)
    assert folded.dirichlet4 <= signed.dirichlet4 * (1 + 1e-12)
    assert folded.total <= signed.total + 1e-12 * abs(signed.total)

def test_energy_on_wrong_grid():
    spec = helper.small_problem('TP-BALL-P5')
    grid = spec.build_grid()
    with pytest.raises(GridMismatchError):
        energy(grid, spec, np.zeros(grid.size + 1))

@pytest.mark.parametrize('name', ['TP-BALL-P5', 'TP-BALL-P3-NEG', 'TP-BALL-P3-POS', 'TP-CUBE-P5'])
def test_gradient_matches_finite_differences(name):
    spec = helper.small_problem(name, lam=3.0)
    grid = spec.build_grid()
    worst = 0.0
    for index in range(5):
        u = helper.random_field(grid, 2 * index, operation='fd')
        phi = helper.random_field(grid, 2 * index + 1, positive=False, operation='fd')
        exact = directional_derivative(grid, spec, u, phi)
        step = 1e-5
        numeric = (energy(grid, spec, u + step * phi).total -
                   energy(grid, spec, u - step * phi).total) / (2 * step)
        worst = max(worst, abs(numeric - exact) / max(abs(exact), 1e-8))

    assert worst <= 1e-5, worst

def test_gradient_field_is_weak_gradient_over_weights():
    spec = helper.small_problem('TP-BALL-P3-POS')
    grid = spec.build_grid()
    ops = Operators.for_problem(grid, spec)
    u = helper.random_field(grid, 4)

    assert np.allclose(gradient_field(grid, spec, u) * grid.weights, ops.weak_gradient(u))

def test_nehari_identity():
    spec = helper.small_problem('TP-BALL-P3-NEG', lam=1.5)
    grid = spec.build_grid()
    ops = Operators.for_problem(grid, spec)
    u = helper.random_field(grid, 5)
    data = spec.nodal(grid)
    D = ops.dirichlet(u)
    expected = spec.a * D ** 2 + ops.inner_mu(u, u) - \
        1.5 * float(np.dot(grid.weights, data.f * u * u)) - \
        float(np.dot(grid.weights, data.g * np.abs(u) ** 3))

    helper.assert_close(nehari(grid, spec, u), expected, 1e-10)

def test_residual_of_zero():
    spec = helper.small_problem('TP-BALL-P5')
    grid = spec.build_grid()

    assert residual_norm(grid, spec, np.zeros(grid.size)) == 0.0

def test_residual_positive_off_solutions():
    spec = helper.small_problem('TP-BALL-P5')
    grid = spec.build_grid()

    assert residual_norm(grid, spec, helper.random_field(grid, 6)) > 0

def test_operators_cached_per_grid():
    spec = helper.small_problem('TP-BALL-P5')
    grid = spec.build_grid()

    assert Operators.for_problem(grid, spec) is Operators.for_problem(grid, spec)

def test_with_lambda_shares_forms():
    spec = helper.small_problem('TP-BALL-P5')
    grid = spec.build_grid()
    ops = Operators.for_problem(grid, spec)
    other = ops.with_lambda(4.0)

    assert other.lam == 4.0, other.lam
    assert ops.lam == 0.0, ops.lam
    assert other.metric is ops.metric

def test_metric_solve_inverts_metric():
    spec = helper.small_problem('TP-BALL-P5')
    grid = spec.build_grid()
    ops = Operators.for_problem(grid, spec)
    b = helper.random_field(grid, 7)

    assert np.allclose(ops.metric.dot(ops.metric_solve(b)), b)

def test_dual_norm_of_metric_image():
    # |K u|_* with the I-shifted preconditioner stays below |u|_mu
    spec = helper.small_problem('TP-BALL-P5')
    grid = spec.build_grid()
    ops = Operators.for_problem(grid, spec)
    u = helper.random_field(grid, 8)

    assert ops.dual_norm(ops.metric.dot(u)) <= ops.norm_mu(u) * (1 + 1e-8)
