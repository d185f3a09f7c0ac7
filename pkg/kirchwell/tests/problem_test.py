# Project imports
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.dirname(os.path.dirname(os.path.dirname(os.path.realpath(__file__))))))

from kirchwell.eigen import omega_pairs
from kirchwell.errors import ConditionError, ProblemError
from kirchwell.grid import GridSpec
from kirchwell.problem import (BallP3Neg, BallP5, ProblemSpec,
                               canonical_names, canonical_problem,
                               tune_g_sign, validate_conditions)
from kirchwell.problem.base import critical_exponent
from kirchwell.tests import helper


def test_canonical_names():
    names = canonical_names()
    for name in ('TP-CUBE-P5', 'TP-BALL-P5', 'TP-BALL-P3-NEG', 'TP-BALL-P3-POS', 'TP-BALL-P3'):
        assert name in names, names

def test_canonical_problem_unknown_name():
    with pytest.raises(ProblemError) as error:
        canonical_problem('NOPE')
    assert 'NOPE' in str(error.value), str(error.value)

def test_canonical_problem_classes():
    assert isinstance(canonical_problem('TP-BALL-P5'), BallP5)
    assert isinstance(canonical_problem('TP-BALL-P3'), BallP3Neg)

def test_canonical_problem_defaults():
    spec = canonical_problem('TP-BALL-P3-NEG')

    assert spec.p == 3.0, spec.p
    assert spec.mu == 1000.0, spec.mu
    assert spec.c_star == 1.0, spec.c_star
    assert spec.grid_spec == GridSpec(3, 3.0, 301, 'radial'), spec.grid_spec

def test_validate_rejects_nonpositive_a():
    with pytest.raises(ProblemError):
        helper.small_problem('TP-BALL-P5', a=0.0)

def test_validate_rejects_critical_p():
    with pytest.raises(ProblemError):
        helper.small_problem('TP-BALL-P5', p=6.0)

def test_validate_rejects_negative_mu():
    with pytest.raises(ProblemError):
        helper.small_problem('TP-BALL-P5', mu=-1.0)

def test_ball_needs_radial_grid():
    with pytest.raises(ProblemError):
        canonical_problem('TP-BALL-P5', grid_spec=GridSpec(3, 3.0, 33))

def test_cube_needs_aligned_faces():
    with pytest.raises(ProblemError):
        canonical_problem('TP-CUBE-P5', grid_spec=GridSpec(3, 2.0, 11))

def test_critical_exponent():
    assert critical_exponent(3) == 6.0
    assert critical_exponent(4) == 4.0
    assert critical_exponent(2) == np.inf

def test_copy_keeps_class_and_grid():
    spec = helper.small_problem('TP-BALL-P5')
    grid = spec.build_grid()
    other = spec.copy(lam=2.0)

    assert isinstance(other, BallP5)
    assert other.lam == 2.0, other.lam
    assert spec.lam == 0.0, spec.lam
    assert other.build_grid() is grid

def test_nodal_samplers_on_ball():
    spec = helper.small_problem('TP-BALL-P5')
    grid = spec.build_grid()
    data = spec.nodal(grid)

    assert np.all(data.V[data.omega] == 0.0)
    assert np.all(data.V[~data.omega] >= 0.0)
    assert np.all(data.f > 0)
    assert data.g[0] > 0, data.g[0]
    assert data.g[-1] < 0, data.g[-1]
    assert spec.nodal(grid) is data

def test_custom_samplers():
    spec = ProblemSpec(
        1, 1.0, 3.0, 0.0, 10.0, 0.5, GridSpec(1, 2.0, 41),
        samplers={
            'V': lambda x: np.maximum(np.abs(x[:, 0]) - 1.0, 0.0),
            'omega': lambda x: np.abs(x[:, 0]) < 1.0,
            'g': np.ones(39),
        }).validate()
    data = spec.nodal(spec.build_grid())

    assert spec.name == 'custom', spec.name
    assert np.all(data.g == 1.0)
    assert int(np.sum(data.omega)) == 19, np.sum(data.omega)

def test_missing_potential():
    spec = ProblemSpec(1, 1.0, 3.0, 0.0, 10.0, 0.5, GridSpec(1, 2.0, 41))
    with pytest.raises(NotImplementedError):
        spec.nodal(spec.build_grid())

def test_to_config():
    config = helper.small_problem('TP-BALL-P3-POS', a=0.5).to_config()

    assert config['problem.name'] == 'TP-BALL-P3-POS', config
    assert config['a'] == 0.5, config
    assert config['n'] == 121, config
    assert config['mode'] == 'radial', config

def test_validate_conditions_ball_p5():
    spec = helper.small_problem('TP-BALL-P5')
    report = validate_conditions(spec, spec.build_grid())

    assert report.passed, report.failed()
    assert 'H3' not in report.conditions, list(report.conditions)
    helper.assert_close(report.measure_V_lt_c0, 4.0 * np.pi / 3.0 * 1.5 ** 3, 0.1)

def test_validate_conditions_h3():
    spec = helper.small_problem('TP-BALL-P3-NEG')
    report = validate_conditions(spec, spec.build_grid())

    assert report.conditions['H3'].passed, report.to_dict()
    assert report.h3_max_violation < 0, report.h3_max_violation

def test_validate_conditions_h3_needs_constants():
    spec = helper.small_problem('TP-BALL-P3-NEG', c_star=None)
    with pytest.raises(ConditionError):
        validate_conditions(spec, spec.build_grid())

def test_validate_conditions_detects_bad_g():
    spec = helper.small_problem('TP-BALL-P5', kappa=-1.0)
    report = validate_conditions(spec, spec.build_grid())

    assert report.failed() == ['D2'], report.failed()
    with pytest.raises(ConditionError):
        report.raise_for_failure()

def test_tune_g_sign_threshold():
    spec = helper.small_problem('TP-BALL-P3-NEG')
    grid = spec.build_grid()
    phi1 = omega_pairs(grid, spec)[0].field
    threshold = tune_g_sign(spec, grid, phi1)

    assert 0.05 < threshold < 1.0, threshold
    assert tune_g_sign(spec, grid, phi1, 'negative') < threshold
    assert tune_g_sign(spec, grid, phi1, 'positive') > threshold

def test_tune_g_sign_bad_target():
    spec = helper.small_problem('TP-BALL-P3-NEG')
    grid = spec.build_grid()
    phi1 = omega_pairs(grid, spec)[0].field
    with pytest.raises(ProblemError):
        tune_g_sign(spec, grid, phi1, 'zero')
