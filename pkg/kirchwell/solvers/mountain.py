"""
Discretized-path mountain pass.

A path of points joins a start (0 or a local minimum) to e0. Every sweep
moves the interior points down the part of the Sobolev gradient normal to the
path, moves the highest point up along the path and down across it
(climbing image), and redistributes the points on either side of it to equal
``|.|_mu`` spacing. Once the gradient at the top is small the point is
polished with Newton.
"""
import numpy as np

from kirchwell import log, settings
from kirchwell.errors import GeometryError, SolverError
from kirchwell.solvers.base import operators
from kirchwell.solvers.geometry import path_energy_cap
from kirchwell.solvers.newton import newton_refine


def _redistribute(ops, path, fixed):
    # Equal arclength between path[0] and path[fixed], and between
    # path[fixed] and path[-1].
    def segment(points):
        if len(points) < 3:
            return points
        lengths = [0.0]
        for left, right in zip(points[:-1], points[1:]):
            lengths.append(lengths[-1] + ops.norm_mu(right - left))
        lengths = np.asarray(lengths)
        if lengths[-1] == 0:
            return points
        targets = np.linspace(0.0, lengths[-1], len(points))
        out = [points[0]]
        for target in targets[1:-1]:
            index = int(np.searchsorted(lengths, target, side='right')) - 1
            index = min(max(index, 0), len(points) - 2)
            span = lengths[index + 1] - lengths[index]
            theta = 0.0 if span == 0 else (target - lengths[index]) / span
            out.append((1.0 - theta) * points[index] +
                       theta * points[index + 1])
        out.append(points[-1])
        return out

    return segment(path[:fixed + 1])[:-1] + segment(path[fixed:])


def _climb(ops, path, k, direction, step, size):
    """Climbing-image step from ``path[k]``.

    The move is capped at half the distance to the nearer neighbour and
    halved while the gradient norm at the trial point exceeds twice
    ``size``. Returns the new point, its energy and the next step.
    """
    length = ops.norm_mu(direction)
    if length == 0:
        return path[k], ops.energy(path[k]), step
    spacing = 0.5 * min(ops.norm_mu(path[k + 1] - path[k]),
                        ops.norm_mu(path[k] - path[k - 1]))
    if spacing > 0:
        step = min(step, spacing / length)
    for _ in range(20):
        candidate = path[k] - step * direction
        trial = ops.energy(candidate)
        R = ops.weak_gradient(candidate, trial.dirichlet)
        if np.sqrt(max(float(np.dot(R, ops.metric_solve(R))), 0.0)) <= \
                2.0 * size:
            return candidate, trial, step * 1.2
        step *= 0.5
    return path[k], ops.energy(path[k]), step


def mountain_pass(grid, spec, e0, start=None, points=41, ops=None):
    """Mountain-pass critical point between ``start`` and ``e0``.

    :param e0: Field with ``J(e0) < J(start)``.
    :param start: Field or :class:`SolveResult`; the zero field when None.
    :raises GeometryError: when the path collapses (its maximum falls to the
        level of its ends).
    :raises SolverError: on iteration cap or Newton failure.
    :returns: :class:`SolveResult` classified ``mountain-pass``; ``extras``
        holds D0 and the energy cap of the initial segment.
    """
    ops = ops or operators(grid, spec)
    end = np.array(grid.check(e0), dtype=float)
    if start is None:
        begin = np.zeros(grid.size)
    else:
        begin = np.array(getattr(start, 'field', start), dtype=float)
    low = max(ops.energy(begin).total, ops.energy(end).total)
    if not ops.energy(end).total < ops.energy(begin).total:
        raise GeometryError(
            'mountain_pass: J(e0) must lie below J at the start of the path')

    D0 = path_energy_cap(grid, spec, end, ops=ops)
    path = [begin + s * (end - begin) for s in np.linspace(0.0, 1.0, points)]
    segment_cap = max(ops.energy(u).total for u in path)
    energies = [ops.energy(u) for u in path]
    steps = [1.0 / (1.0 + 3.0 * ops.a * e.dirichlet) for e in energies]
    switch = 1e-4
    tolerance = settings.tolerances['mountain_pass']
    max_norm = max(ops.norm_mu(u) for u in path)
    result = None

    iteration = 0
    for iteration in range(1, settings.iteration_caps['mountain_pass'] + 1):
        top = 1 + int(np.argmax([e.total for e in energies[1:-1]]))
        if energies[top].total <= low + 1e-12 * max(1.0, abs(low)):
            raise GeometryError(
                'mountain_pass: path collapse, max J along the path fell to '
                '{:.6g}'.format(energies[top].total))

        gradients = {}
        for k in range(1, points - 1):
            R = ops.weak_gradient(path[k], energies[k].dirichlet)
            gradients[k] = (R, ops.metric_solve(R))
        R, z = gradients[top]
        size = np.sqrt(max(float(np.dot(R, z)), 0.0))
        if size <= switch:
            try:
                result = newton_refine(grid, spec, path[top], 'mountain-pass',
                                       ops, iteration, max_norm)
            except SolverError as error:
                log.info('mountain_pass: polish failed at {:.3g} ({})'.format(
                    size, error))
                result = None
            if result is not None and \
                    ops.norm_mu(result.field - begin) > \
                    settings.tolerances['dedup'] * max(1.0, result.norm_mu) and \
                    result.energy > ops.energy(begin).total:
                break
            result = None
            if switch <= tolerance:
                break
            switch = max(switch * 0.1, tolerance)

        for k in range(1, points - 1):
            tangent = path[k + 1] - path[k - 1]
            length = ops.norm_mu(tangent)
            if length > 0:
                tangent = tangent / length
            z = gradients[k][1]
            along = ops.inner_mu(z, tangent)
            if k == top:
                direction = z - 2.0 * along * tangent
                path[k], energies[k], steps[k] = _climb(
                    ops, path, k, direction, steps[k], size)
                continue
            direction = z - along * tangent
            for _ in range(20):
                candidate = path[k] - steps[k] * direction
                trial = ops.energy(candidate)
                if trial.total <= energies[k].total:
                    path[k], energies[k] = candidate, trial
                    steps[k] *= 1.2
                    break
                steps[k] *= 0.5

        path = _redistribute(ops, path, top)
        energies = [ops.energy(u) for u in path]
        max_norm = max([max_norm] + [ops.norm_mu(u) for u in path])

    if result is None:
        raise SolverError(
            'mountain_pass: no critical point after {} sweeps'.format(
                iteration))
    result.extras['D0'] = D0
    result.extras['segment_cap'] = segment_cap
    if start is None:
        result.extras['below_D0'] = result.energy <= \
            D0 + settings.tolerances['mountain_pass']
    log.info_json('mountain_pass', result.to_dict())
    return result
