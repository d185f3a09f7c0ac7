"""
Problem definitions and the canonical test problems.
"""
from kirchwell.errors import ProblemError
from kirchwell.problem.base import (ProblemSpec, ValidationReport,
                                    get_all_subclasses, tune_g_sign,
                                    validate_conditions)
from kirchwell.problem.ball import BallP3Neg, BallP3Pos, BallP5
from kirchwell.problem.cube import CubeP5


def canonical_names():
    names = []
    for cls in get_all_subclasses():
        names.extend(cls.get_valid_names())
    return sorted(names)


def canonical_problem(name, **overrides):
    """Build a canonical problem by name.

    :param str name: One of :func:`canonical_names`.
    :param overrides: ProblemSpec keyword arguments replacing the defaults,
        ``grid_spec`` included.
    :raises ProblemError: for an unknown name.
    :returns: :class:`ProblemSpec`
    """
    cls = ProblemSpec.get_class_by_name(name, get_all_subclasses())
    if cls is None:
        raise ProblemError('unknown problem {!r}; choose from {}'.format(
            name, ', '.join(canonical_names())))

    values = dict(cls.defaults)
    values['grid_spec'] = cls.default_grid_spec()
    values['name'] = name
    values.update(overrides)
    return cls(**values).validate()


__all__ = ['ProblemSpec', 'ValidationReport', 'canonical_names',
           'canonical_problem', 'tune_g_sign', 'validate_conditions',
           'BallP3Neg', 'BallP3Pos', 'BallP5', 'CubeP5']
