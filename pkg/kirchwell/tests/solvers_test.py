# Project imports
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.dirname(os.path.dirname(os.path.dirname(os.path.realpath(__file__))))))

from kirchwell import settings
from kirchwell.constants import build_report
from kirchwell.eigen import mu_pairs
from kirchwell.errors import GeometryError, SolverError
from kirchwell.functional import Operators
from kirchwell.solvers import (Census, GeometryReport, SolveResult, ball_min,
                               crest_radius, deflated_search, exterior_min,
                               find_e0, mountain_pass, multiplicity_census,
                               newton_refine, path_energy_cap, sphere_min)
from kirchwell.solvers.base import is_positive, scale_to
from kirchwell.solvers.census import deduplicate
from kirchwell.solvers.geometry import ray_energy
from kirchwell.solvers.mountain import _climb
from kirchwell.solvers.newton import Linearization, is_trivial
from kirchwell.tests import helper


def _p5(fraction=0.5):
    spec = helper.small_problem('TP-BALL-P5')
    grid = spec.build_grid()
    lambda1_mu = mu_pairs(grid, spec)[0].value
    spec = spec.copy(lam=fraction * lambda1_mu)
    return spec, grid, Operators.for_problem(grid, spec)

def _p3_neg(lam_fraction, a_fraction=None):
    # Coercive sub-quartic problem; a is taken relative to a0(p) when given.
    spec = helper.small_problem('TP-BALL-P3-NEG')
    grid = spec.build_grid()
    if a_fraction is not None:
        spec = spec.copy(a=a_fraction * build_report(grid, spec).a0_p)
    spec = spec.copy(lam=lam_fraction * mu_pairs(grid, spec)[0].value)
    return spec, grid, Operators.for_problem(grid, spec)

def _result(ops, field, energy, classification='refined'):
    return SolveResult(field, energy, 0.0, ops.norm_mu(field), classification,
                       1, True, 0.0, ops.norm_mu(field), ops.lam, ops.mu)

def test_is_positive():
    spec, grid, ops = _p5()
    u = helper.random_field(grid)

    assert is_positive(ops, u) is True
    assert is_positive(ops, -u) is False
    assert is_positive(ops, np.zeros(grid.size)) is False

def test_scale_to():
    spec, grid, ops = _p5()
    u = scale_to(ops, helper.random_field(grid), 0.25)

    helper.assert_close(ops.norm_mu(u), 0.25, 1e-12)
    assert not np.any(scale_to(ops, np.zeros(grid.size), 1.0))

def test_ray_energy_matches_energy():
    spec, grid, ops = _p5()
    direction = helper.random_field(grid, 2)
    s = np.array([0.0, 0.3, 1.0, 2.5])
    values = ray_energy(ops, direction, s)

    assert values[0] == 0.0
    for scalar, value in zip(s[1:], values[1:]):
        helper.assert_close(value, ops.energy(scalar * direction).total, 1e-10)

def test_sphere_min_positive_on_small_sphere():
    spec, grid, ops = _p5()
    value, argmin = sphere_min(grid, spec, 1e-3, starts=3, ops=ops)

    assert value > 0, value
    helper.assert_close(ops.norm_mu(argmin), 1e-3, 1e-10)

def test_sphere_min_needs_positive_radius():
    spec, grid, ops = _p5()
    with pytest.raises(GeometryError):
        sphere_min(grid, spec, 0.0, ops=ops)

def test_find_e0_superquartic():
    spec, grid, ops = _p5()
    e0 = find_e0(grid, spec, 1e-2, ops=ops)

    assert ops.energy(e0).total < 0
    assert ops.norm_mu(e0) > 1e-2
    assert path_energy_cap(grid, spec, e0, ops=ops) > 0
    assert 0 < crest_radius(grid, spec, e0, ops=ops) < ops.norm_mu(e0)

def test_find_e0_fails_without_positive_g():
    spec, grid, ops = _p5()
    spec = spec.copy(samplers={'g': -np.ones(grid.size)})
    with pytest.raises(GeometryError):
        find_e0(grid, spec, 1e-2)

def test_geometry_report_passed():
    report = GeometryReport(0.1, 0.002, None, None, -1.0, 2.0)

    assert report.passed is True
    assert GeometryReport(0.1, -0.002, None, None, -1.0, 2.0).passed is False
    assert GeometryReport(0.1, 0.002, None, None, -1.0, 0.05).passed is False
    assert report.to_dict()['passed'] is True

def test_linearization_matches_gradient_difference():
    spec, grid, ops = _p5()
    u = 3.0 * helper.random_field(grid, 4)
    x = helper.random_field(grid, 5, positive=False)
    step = 1e-6
    difference = (ops.weak_gradient(u + step * x) -
                  ops.weak_gradient(u - step * x)) / (2 * step)
    applied = Linearization(ops, u).dot(x)

    assert np.max(np.abs(applied - difference)) <= 1e-5 * np.max(np.abs(applied))

def test_linearization_solve_inverts_dot():
    spec, grid, ops = _p5()
    u = helper.random_field(grid, 6)
    b = helper.random_field(grid, 7, positive=False)
    H = Linearization(ops, u)

    assert np.max(np.abs(H.dot(H.solve(b)) - b)) <= 1e-8 * np.max(np.abs(b))

def test_newton_refine_keeps_zero():
    spec, grid, ops = _p5()
    result = newton_refine(grid, spec, np.zeros(grid.size), ops=ops)

    assert is_trivial(result)
    assert result.residual == 0.0
    assert result.positive is False

def test_deflated_search_needs_known():
    spec, grid, ops = _p5()
    with pytest.raises(SolverError):
        deflated_search(grid, spec, [], ops=ops)

def test_deduplicate_drops_repeats_and_trivial():
    spec, grid, ops = _p5()
    u = helper.random_field(grid, 8)
    v = helper.random_field(grid, 9)
    results = [
        _result(ops, u, 1.0),
        _result(ops, u * (1 + 1e-6), 1.0 - 1e-8),
        _result(ops, v, -0.5),
        _result(ops, np.zeros(grid.size), 0.0),
    ]
    kept = deduplicate(ops, results)

    assert [result.energy for result in kept] == [1.0, -0.5]
    assert kept[0] is results[0]

def test_census_properties():
    spec, grid, ops = _p5()
    census = Census([_result(ops, helper.random_field(grid, 1), 0.3),
                     _result(ops, helper.random_field(grid, 2), -0.1)])

    assert census.count == 2
    assert census.predicted == 0
    assert census.signs == ['+', '-']
    payload = census.to_dict()
    assert payload['count'] == 2
    assert len(payload['solutions']) == 2
    assert payload['regime'] is None

def test_census_finds_mountain_pass_solution():
    spec, grid, ops = _p5()
    census = multiplicity_census(spec, grid=grid, ladder=False)

    assert census.regime.name == 'thm1-i', census.regime
    assert census.count >= 1, census.notes
    assert census.ladder == [spec.mu]
    for result in census:
        assert result.residual <= settings.tolerances['solve'], result
    assert '+' in census.signs, census.signs

def test_mountain_pass_superquartic():
    spec, grid, ops = _p5()
    e0 = find_e0(grid, spec, 1e-2, ops=ops)
    result = mountain_pass(grid, spec, e0, ops=ops)

    assert result.classification == 'mountain-pass'
    assert result.energy > 0, result.energy
    assert result.residual <= settings.tolerances['solve'], result.residual
    assert result.positive
    assert 0 < result.norm_mu
    assert result.extras['below_D0'] is True
    assert result.energy <= result.extras['D0'] + settings.tolerances['mountain_pass']

def test_climb_step_is_capped_by_path_spacing():
    spec, grid, ops = _p5()
    direction = helper.random_field(grid, 3)
    spacing = 0.1 * ops.norm_mu(direction)
    path = [0.0 * direction, 0.1 * direction, 0.2 * direction]
    z = helper.random_field(grid, 4, positive=False)
    point, energy, step = _climb(ops, path, 1, z, 1e6, np.inf)

    assert ops.norm_mu(point - path[1]) <= 0.5 * spacing * (1 + 1e-10)
    helper.assert_close(energy.total, ops.energy(point).total, 1e-12)

def test_climb_keeps_point_when_gradient_grows():
    spec, grid, ops = _p5()
    direction = helper.random_field(grid, 3)
    path = [0.0 * direction, 0.1 * direction, 0.2 * direction]
    point, energy, step = _climb(ops, path, 1, helper.random_field(grid, 4), 1.0, 0.0)

    assert np.array_equal(point, path[1])
    assert step < 1e-5

def test_ball_min_above_lambda1():
    spec, grid, ops = _p3_neg(1.1)
    rho = 10.0
    result = ball_min(grid, spec, rho, ops=ops)

    assert result.classification == 'ball-min'
    assert result.energy < 0, result.energy
    assert 0 < result.norm_mu < rho
    assert result.extras['rho'] == rho
    assert result.residual <= settings.tolerances['solve'], result.residual
    assert result.positive

    # Inside a much smaller ball every descent ends on the sphere.
    with pytest.raises(GeometryError):
        ball_min(grid, spec, 1e-3 * result.norm_mu, ops=ops)

def test_exterior_min_below_a0():
    spec, grid, ops = _p3_neg(0.5, 0.5)
    e0 = find_e0(grid, spec, 1e-3, ops=ops)
    crest = crest_radius(grid, spec, e0, ops=ops)
    bound = build_report(grid, spec).C_N_a_lambda
    result = exterior_min(grid, spec, crest, e0, bound, ops=ops)

    assert result.classification == 'exterior-min'
    assert result.energy < 0, result.energy
    assert result.energy <= ops.energy(e0).total + 1e-8
    assert result.norm_mu >= crest * (1 - 1e-6)
    assert result.residual <= settings.tolerances['solve'], result.residual
    assert result.extras['rho'] == crest

def test_newton_refine_converges_quadratically():
    spec, grid, ops = _p3_neg(1.1)
    solution = ball_min(grid, spec, 10.0, ops=ops)
    kick = helper.random_field(grid, 6, positive=False)
    start = solution.field + 1e-2 * solution.norm_mu * kick / ops.norm_mu(kick)
    result = newton_refine(grid, spec, start, ops=ops)
    history = result.extras['residual_history']

    assert len(history) >= 2, history
    assert history[-1] <= settings.tolerances['newton']
    assert history[-1] / history[-2] <= 0.1, history
    C = history[1] / history[0] ** 2
    for before, after in zip(history[1:-1], history[2:]):
        if after > settings.tolerances['newton']:
            assert after <= 10.0 * C * before ** 2, history
    assert solution.distance(ops, result) <= 1e-5 * solution.norm_mu

def test_deflated_search_finds_distinct_solution():
    spec, grid, ops = _p3_neg(1.1)
    zero = SolveResult.from_field(ops, np.zeros(grid.size), 'refined', 0)
    found = deflated_search(grid, spec, [zero], ops=ops)

    assert found is not None
    assert found.residual <= settings.tolerances['solve']
    assert found.distance(ops, zero) > settings.tolerances['dedup']

    another = deflated_search(grid, spec, [zero, found], ops=ops)
    if another is not None:
        for known in (zero, found):
            assert another.distance(ops, known) >= \
                settings.tolerances['dedup'] * max(1.0, known.norm_mu)
