# Project imports
import os
import sys

import numpy as np

sys.path.insert(0, os.path.abspath(os.path.dirname(os.path.dirname(os.path.dirname(os.path.realpath(__file__))))))

from kirchwell.grid import GridSpec, build_grid
from kirchwell.seeding import generator, smooth_field
from kirchwell.tests import helper


def test_generator_is_reproducible():
    first = generator(3, 'sphere_min', 2).uniform(size=5)
    again = generator(3, 'sphere_min', 2).uniform(size=5)

    assert np.array_equal(first, again)

def test_generator_streams_differ():
    base = generator(3, 'sphere_min', 2).uniform(size=5)

    assert not np.array_equal(base, generator(4, 'sphere_min', 2).uniform(size=5))
    assert not np.array_equal(base, generator(3, 'find_e0', 2).uniform(size=5))
    assert not np.array_equal(base, generator(3, 'sphere_min', 3).uniform(size=5))

def test_smooth_field_decays_to_boundary():
    grid = build_grid(GridSpec(1, 1.0, 33))
    u = smooth_field(grid, 0, 'tests')

    # Only interior nodes are stored; the envelope is small next to the walls.
    assert np.all(u > 0)
    assert max(u[0], u[-1]) < 0.4 * np.max(u), (u[0], u[-1])

def test_smooth_field_signs():
    grid = build_grid(helper.SMALL_BALL)
    signed = [smooth_field(grid, 0, 'tests', index, positive=False) for index in range(10)]

    assert any(np.any(u < 0) for u in signed)
    assert np.all(smooth_field(grid, 0, 'tests', 1) >= 0)
