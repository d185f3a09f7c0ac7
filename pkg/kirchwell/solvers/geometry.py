"""
Mountain-pass geometry: the minimum of J on a sphere ``|u|_mu = rho``, a far
point e0 with ``J(e0) < 0`` and the energy profile along the segment from 0
to e0.
"""
import numpy as np

from kirchwell import log, settings
from kirchwell.constants import (gamma_p, g_phi1_integral, t_a_gamma,
                                 t_a_subquartic)
from kirchwell.eigen import mu_pairs, omega_pairs
from kirchwell.errors import ConditionError, GeometryError
from kirchwell.functional import power
from kirchwell.seeding import smooth_field
from kirchwell.solvers.base import GeometryReport, operators, scale_to


def sphere_min(grid, spec, rho, seed=None, starts=8, ops=None):
    """Smallest J found on ``{|u|_mu = rho}``.

    Riemannian gradient descent in the ``<.,.>_mu`` metric with the radial
    retraction; the first start points along phi_{1,mu}, the others are
    seeded smooth fields. The value is an upper bound on the infimum.

    :returns: tuple(float, numpy.ndarray)
    """
    if not rho > 0:
        raise GeometryError('sphere_min needs rho > 0 (got {})'.format(rho))
    ops = ops or operators(grid, spec)
    seed = settings.default_seed if seed is None else seed

    fields = [mu_pairs(grid, spec)[0].field]
    fields.extend(smooth_field(grid, seed, 'sphere_min', index)
                  for index in range(1, starts))

    best = None
    for index, start in enumerate(fields):
        u = scale_to(ops, start, rho)
        energy = ops.energy(u)
        step = 1.0 / (1.0 + 3.0 * ops.a * energy.dirichlet)
        for _ in range(settings.iteration_caps['sphere']):
            R = ops.weak_gradient(u, energy.dirichlet)
            z = ops.metric_solve(R)
            tangent = z - (float(np.dot(u, R)) / rho ** 2) * u
            size2 = ops.inner_mu(tangent, tangent)
            if size2 <= (1e-10 * (1.0 + abs(energy.total))) ** 2:
                break
            accepted = False
            for _ in range(30):
                candidate = scale_to(ops, u - step * tangent, rho)
                trial = ops.energy(candidate)
                if trial.total < energy.total - 1e-4 * step * size2:
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                break
            u, energy = candidate, trial
            step *= 1.5
        log.info('sphere_min: start {} value {:.6g}'.format(index,
                                                            energy.total))
        if best is None or energy.total < best[0]:
            best = (energy.total, u)
    return best


def ray_energy(ops, direction, s):
    """J(s * direction) for an array of scalars s."""
    s = np.asarray(s, dtype=float)
    dirichlet = ops.dirichlet(direction)
    quadratic = ops.inner_mu(direction, direction) - ops.lam * float(
        np.dot(ops.w, ops.f * direction ** 2))
    nonlinear = float(np.dot(ops.w, ops.g * power(direction, ops.p)))
    magnitude = np.abs(s)
    return 0.25 * ops.a * dirichlet ** 2 * s ** 4 + 0.5 * quadratic * s ** 2 - \
        nonlinear * magnitude ** ops.p / ops.p


def path_energy_cap(grid, spec, e0, points=1001, ops=None):
    """``max_{0 <= s <= 1} J(s e0)`` on a uniform s-grid (D0)."""
    ops = ops or operators(grid, spec)
    return float(np.max(ray_energy(ops, grid.check(e0),
                                    np.linspace(0.0, 1.0, points))))


def crest_radius(grid, spec, e0, points=1001, ops=None):
    """``|s* e0|_mu`` where ``s -> J(s e0)`` peaks on ``[0, 1]``."""
    ops = ops or operators(grid, spec)
    s = np.linspace(0.0, 1.0, points)
    values = ray_energy(ops, grid.check(e0), s)
    return float(s[int(np.argmax(values))]) * ops.norm_mu(e0)


def _directions(grid, spec):
    data = spec.nodal(grid)
    yield mu_pairs(grid, spec)[0].field
    yield omega_pairs(grid, spec)[0].field
    yield np.maximum(data.g, 0.0) * grid.envelope


def _scan(ops, direction, rho):
    # Lowest J(t d) over a log-spaced t range starting on the sphere.
    first = rho / ops.norm_mu(direction)
    t = first * np.logspace(0.0, 4.0, 400)[1:]
    values = ray_energy(ops, direction, t)
    index = int(np.argmin(values))
    return t[index] * direction, values[index]


def find_e0(grid, spec, rho, seed=None, ops=None):
    """A field with ``J(e0) < 0`` and ``|e0|_mu > rho``.

    For p > 4 a direction with ``integral g |phi|^p > 0`` is scaled up until
    J is negative. For p < 4 the amplitude t_a along phi1 is tried first when
    ``integral_Omega g phi1^p > 0``, then t_a along the Gamma_p maximizer,
    then a scan along each direction.

    :raises GeometryError: when no such field is found.
    """
    ops = ops or operators(grid, spec)
    weights = grid.weights * spec.nodal(grid).g

    def accept(u):
        return ops.energy(u).total < 0 and ops.norm_mu(u) > rho

    if spec.p < 4:
        first = omega_pairs(grid, spec)[0]
        G = g_phi1_integral(grid, spec, first.field)
        if G > 0:
            u = t_a_subquartic(spec.a, spec.p, G, first.value) * first.field
            if accept(u):
                return u
        data = spec.nodal(grid)
        try:
            estimate = gamma_p(grid, data.f, data.g, spec.p, data.omega,
                               seed=seed)
        except ConditionError as error:
            log.info('find_e0: {}'.format(error))
        else:
            u = t_a_gamma(spec.a, spec.p, estimate.value, 1.0) * \
                estimate.field
            if accept(u):
                return u

    for direction in _directions(grid, spec):
        if not np.any(direction) or \
                float(np.dot(weights, power(direction, spec.p))) <= 0:
            continue
        if spec.p > 4:
            t = rho / ops.norm_mu(direction)
            for _ in range(80):
                t *= 2.0
                u = t * direction
                if accept(u):
                    return u
        else:
            u, _ = _scan(ops, direction, rho)
            if accept(u):
                return u

    raise GeometryError(
        'find_e0: no field with J < 0 outside |u|_mu = {:.6g} (is '
        'integral g |u|^p > 0 possible, and is a below a0(p)?)'.format(rho))


def check_geometry(grid, spec, rho, radius_name=None, seed=None, e0=None):
    """Sphere minimum at ``rho`` and the far point, as a
    :class:`GeometryReport`."""
    ops = operators(grid, spec)
    value, argmin = sphere_min(grid, spec, rho, seed, ops=ops)
    if e0 is None:
        e0 = find_e0(grid, spec, rho, seed, ops)
    report = GeometryReport(rho, value, argmin, e0, ops.energy(e0).total,
                            ops.norm_mu(e0), radius_name)
    log.info_json('check_geometry', report.to_dict())
    return report
