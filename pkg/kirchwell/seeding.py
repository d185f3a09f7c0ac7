"""
Deterministic random streams. Every multistart draws from its own
counter-based generator keyed by (seed, operation, start index), so the
order in which starts run never changes what they see.
"""
from zlib import crc32

import numpy as np


def generator(seed, operation, index=0):
    """Return a numpy Generator for one start of one operation.

    :param int seed: The user-facing seed (``--seed``).
    :param str operation: Name of the calling operation, e.g. ``sphere_min``.
    :param int index: Start index within the operation.
    :returns: numpy.random.Generator
    """
    key = np.random.SeedSequence(
        [int(seed) & 0xFFFFFFFF, crc32(operation.encode('utf8')), int(index)])
    return np.random.Generator(np.random.Philox(key))


def smooth_field(grid, seed, operation, index=0, positive=True):
    """Random field built from a few smooth bumps, zero on the boundary.

    Nodal white noise has an enormous Dirichlet energy on fine grids, so
    starts are drawn as sums of Gaussian bumps instead.

    :returns: numpy.ndarray of length ``grid.size``
    """
    rng = generator(seed, operation, index)
    points = grid.points
    L = grid.spec.half_length
    values = np.zeros(grid.size)
    for _ in range(4):
        if grid.mode == 'radial':
            center = np.zeros(1)
            center[0] = rng.uniform(0.0, 0.5 * L)
        else:
            center = rng.uniform(-0.5 * L, 0.5 * L, size=grid.dim)
        width = rng.uniform(0.15, 0.4) * L
        amplitude = rng.uniform(0.2, 1.0)
        if not positive:
            amplitude *= rng.choice([-1.0, 1.0])
        distance = np.sum((points - center) ** 2, axis=1)
        values += amplitude * np.exp(-distance / width ** 2)
    return values * grid.envelope
