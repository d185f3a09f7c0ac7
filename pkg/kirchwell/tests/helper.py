import os
import random
import string
import tempfile

from kirchwell.config import load_config
from kirchwell.grid import GridSpec
from kirchwell.problem import canonical_problem
from kirchwell.seeding import smooth_field


#: Radial grid small enough for unit tests.
SMALL_BALL = GridSpec(3, 3.0, 121, 'radial')


def small_problem(name, nodes=121, **overrides):
    """A canonical problem on a coarse grid."""
    if name.startswith('TP-CUBE'):
        grid_spec = GridSpec(3, 2.0, 17, 'tensor')
    else:
        grid_spec = SMALL_BALL.copy(nodes=nodes)
    return canonical_problem(name, grid_spec=grid_spec, **overrides)


def random_field(grid, index=0, positive=True, operation='tests'):
    return smooth_field(grid, 0, operation, index, positive=positive)


def relative(value, expected):
    return abs(value - expected) / abs(expected)


def assert_close(value, expected, tolerance):
    assert relative(value, expected) <= tolerance, (value, expected)


def create_working_folder():
    temporary_folder = tempfile.gettempdir()
    folder = os.path.join(temporary_folder, random_string(10), random_string(10))
    os.makedirs(folder)

    return (temporary_folder, folder)


def random_string(length):
    return ''.join(random.SystemRandom().choice(string.ascii_lowercase + string.digits) for _ in range(length))


def reset_config():
    if hasattr(load_config, 'config'):
        del load_config.config
