"""
Result types shared by the solvers and the helpers they all use: positivity
checks, the Sobolev-gradient descent loop and a few one-line norms.
"""
from collections import OrderedDict

import numpy as np

from kirchwell import log, settings
from kirchwell.functional import Operators


class SolveResult(object):

    """One critical point of J.

    :ivar numpy.ndarray field: Nodal values on the problem grid.
    :ivar float energy: J at the field.
    :ivar float residual: Dual residual norm.
    :ivar float norm_mu: ``|u|_mu``.
    :ivar str classification: ``ball-min``, ``exterior-min``,
        ``mountain-pass`` or ``refined``.
    :ivar int iterations: Outer iterations of the search, Newton included.
    :ivar bool positive: Strictly positive on Omega and nonnegative (up to
        round-off) elsewhere.
    :ivar float nehari: ``<J'(u), u>``.
    :ivar float max_norm: Largest ``|u|_mu`` seen along the run.
    """

    def __init__(self, field, energy, residual, norm_mu, classification,
                 iterations, positive, nehari, max_norm, lam, mu, extras=None):
        self.field = field
        self.energy = float(energy)
        self.residual = float(residual)
        self.norm_mu = float(norm_mu)
        self.classification = classification
        self.iterations = int(iterations)
        self.positive = bool(positive)
        self.nehari = float(nehari)
        self.max_norm = float(max_norm)
        self.lam = float(lam)
        self.mu = float(mu)
        self.extras = OrderedDict(extras or {})

    @classmethod
    def from_field(cls, ops, u, classification, iterations, max_norm=None,
                   residual=None, extras=None):
        """Measure everything a result records at ``u``."""
        norm = ops.norm_mu(u)
        if residual is None:
            residual = ops.residual(u)
        return cls(
            u, ops.energy(u).total, residual, norm, classification,
            iterations, is_positive(ops, u),
            float(np.dot(ops.weak_gradient(u), u)),
            max(norm, max_norm or 0.0), ops.lam, ops.mu, extras)

    def distance(self, ops, other):
        """``|u - v|_mu`` to another result or field."""
        field = other.field if isinstance(other, SolveResult) else other
        return ops.norm_mu(self.field - field)

    def to_dict(self):
        payload = OrderedDict([
            ('classification', self.classification),
            ('energy', self.energy),
            ('residual', self.residual),
            ('norm_mu', self.norm_mu),
            ('positive', self.positive),
            ('nehari', self.nehari),
            ('max_norm', self.max_norm),
            ('iterations', self.iterations),
            ('lambda', self.lam),
            ('mu', self.mu),
        ])
        payload.update(self.extras)
        return payload

    def __repr__(self):
        return 'SolveResult({}, energy={:.6g}, residual={:.2g})'.format(
            self.classification, self.energy, self.residual)


class GeometryReport(object):

    """Mountain-pass geometry at one radius.

    ``passed`` holds when the sphere minimum is positive, ``J(e0) < 0`` and
    e0 lies outside the sphere.
    """

    def __init__(self, rho, sphere_min, argmin, e0, e0_energy, e0_norm,
                 radius_name=None):
        self.rho = float(rho)
        self.sphere_min = float(sphere_min)
        self.argmin = argmin
        self.e0 = e0
        self.e0_energy = float(e0_energy)
        self.e0_norm = float(e0_norm)
        self.radius_name = radius_name

    @property
    def passed(self):
        return self.sphere_min > 0 and self.e0_energy < 0 and \
            self.e0_norm > self.rho

    def to_dict(self):
        return OrderedDict([
            ('rho', self.rho),
            ('radius_name', self.radius_name),
            ('sphere_min', self.sphere_min),
            ('e0_energy', self.e0_energy),
            ('e0_norm', self.e0_norm),
            ('passed', self.passed),
        ])


def operators(grid, spec):
    return Operators.for_problem(grid, spec)


def is_positive(ops, u):
    """Positive on every Omega node, ``>= -1e-10 |u|_inf`` elsewhere."""
    scale = float(np.max(np.abs(u))) if u.size else 0.0
    if scale == 0:
        return False
    omega = ops.omega.astype(bool)
    if np.any(omega) and not np.all(u[omega] > 0):
        return False
    return bool(np.all(u >= -1e-10 * scale))


def descend(ops, u, project=None, positive=True, cap=None, tolerance=None,
            operation='descend'):
    """Sobolev-gradient descent on J with Barzilai-Borwein steps.

    The gradient is the Riesz representative in ``<.,.>_mu``. Trial points
    pass through ``project`` (a retraction onto the feasible set) and are
    backtracked until the Armijo condition holds. When ``positive`` is set
    the iterate is replaced by its absolute value every 10 iterations, which
    never raises J.

    :returns: tuple(field, iterations, max_norm, gradient_norm)
    """
    cap = cap or settings.iteration_caps['descent']
    tolerance = tolerance or settings.tolerances['mountain_pass']
    project = project or (lambda v: v)

    u = project(np.array(u, dtype=float))
    energy = ops.energy(u)
    R = ops.weak_gradient(u, energy.dirichlet)
    z = ops.metric_solve(R)
    step = 1.0 / (1.0 + 3.0 * ops.a * energy.dirichlet)
    max_norm = ops.norm_mu(u)
    size = np.sqrt(max(float(np.dot(R, z)), 0.0))

    iteration = 0
    for iteration in range(1, cap + 1):
        if size <= tolerance:
            break
        accepted = False
        for _ in range(40):
            candidate = project(u - step * z)
            trial = ops.energy(candidate)
            if trial.total <= energy.total - 1e-4 * float(
                    np.dot(R, u - candidate)):
                accepted = True
                break
            step *= 0.5
        if not accepted:
            log.info('{}: line search stalled at gradient {:.3g}'.format(
                operation, size))
            break

        if positive and iteration % 10 == 0:
            candidate = project(np.abs(candidate))
            trial = ops.energy(candidate)

        R_next = ops.weak_gradient(candidate, trial.dirichlet)
        z_next = ops.metric_solve(R_next)
        du = candidate - u
        dR = R_next - R
        curvature = float(np.dot(du, dR))
        if curvature > 0:
            step = ops.inner_mu(du, du) / curvature
        else:
            step *= 2.0

        u, energy, R, z = candidate, trial, R_next, z_next
        size = np.sqrt(max(float(np.dot(R, z)), 0.0))
        max_norm = max(max_norm, ops.norm_mu(u))

    return u, iteration, max_norm, size


def scale_to(ops, u, rho):
    """``u`` rescaled to ``|u|_mu = rho``."""
    norm = ops.norm_mu(u)
    if norm == 0:
        return u
    return u * (rho / norm)
