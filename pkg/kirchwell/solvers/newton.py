"""
Newton polish and deflated Newton.

The linearization of J' at u is

    H = (a|u|_D^2 + 1) K + diag(w (mu V - lambda f - (p-1) g |u|^(p-2)))
        + 2a (Ku)(Ku)^T

whose last term is the nonlocal rank-one part; :class:`Linearization`
factorizes the sparse part once and handles the rank-one part with the
Sherman-Morrison formula.
"""
import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from kirchwell import log, settings
from kirchwell.errors import SolverError
from kirchwell.functional import power
from kirchwell.seeding import smooth_field
from kirchwell.solvers.base import SolveResult, operators


class Linearization(object):

    """Factorized Hessian of J at one field."""

    def __init__(self, ops, u):
        self.ops = ops
        dirichlet = ops.dirichlet(u)
        self.border = ops.K.dot(u)
        self.coupling = 2.0 * ops.a
        local = ops.w * (ops.mu * ops.V - ops.lam * ops.f -
                         (ops.p - 1.0) * ops.g * power(u, ops.p - 2.0))
        self.sparse = sparse.csc_matrix(
            (ops.a * dirichlet + 1.0) * ops.K + sparse.diags(local))
        try:
            self._lu = splu(self.sparse)
        except RuntimeError as error:
            raise SolverError(
                'newton: singular linearization ({})'.format(error))
        self._border_solve = self._lu.solve(self.border)
        self._denominator = 1.0 + self.coupling * float(
            np.dot(self.border, self._border_solve))
        if abs(self._denominator) < 1e-14:
            raise SolverError('newton: singular nonlocal linearization')

    def dot(self, x):
        return self.sparse.dot(x) + self.coupling * self.border * float(
            np.dot(self.border, x))

    def solve(self, b):
        x = self._lu.solve(b)
        correction = self.coupling * float(np.dot(self.border, x)) / \
            self._denominator
        return x - correction * self._border_solve


def newton_refine(grid, spec, u0, classification='refined', ops=None,
                  iterations=0, max_norm=None, extras=None):
    """Polish ``u0`` to a critical point of J.

    Damped Newton: a full step is halved while the residual grows; three
    consecutive steps that still raise it count as divergence.

    :raises SolverError: on divergence, a singular linearization or a final
        residual above the solve tolerance.
    :returns: :class:`SolveResult`
    """
    ops = ops or operators(grid, spec)
    u = np.array(grid.check(u0), dtype=float)
    tolerance = settings.tolerances['newton']
    residual = ops.residual(u)
    max_norm = max(max_norm or 0.0, ops.norm_mu(u))
    increases = 0
    steps = 0
    history = [residual]

    for steps in range(1, settings.iteration_caps['newton'] + 1):
        if residual <= tolerance:
            steps -= 1
            break
        R = ops.weak_gradient(u)
        delta = -Linearization(ops, u).solve(R)
        scale = 1.0
        for _ in range(8):
            candidate = u + scale * delta
            trial = ops.residual(candidate)
            if trial < residual:
                break
            scale *= 0.5
        if trial >= residual:
            increases += 1
            if increases >= 3:
                raise SolverError(
                    'newton_refine: residual increased 3 consecutive steps '
                    '(last {:.3g})'.format(trial))
            candidate = u + delta
            trial = ops.residual(candidate)
        else:
            increases = 0
        u, residual = candidate, trial
        history.append(residual)
        max_norm = max(max_norm, ops.norm_mu(u))
        log.info('newton_refine: step {} residual {:.3g}'.format(
            steps, residual))

    if not residual <= settings.tolerances['solve']:
        raise SolverError(
            'newton_refine: residual {:.3g} above {:.3g} after {} '
            'iterations'.format(residual, settings.tolerances['solve'],
                                steps))
    if ops.norm_mu(u) == 0:
        log.warn('newton_refine: converged to the trivial solution')
    result = SolveResult.from_field(ops, u, classification,
                                    iterations + steps, max_norm, residual,
                                    extras)
    result.extras['residual_history'] = history
    return result


def _separation(ops, field, known):
    return [ops.norm_mu(field - item.field) /
            max(1.0, item.norm_mu) for item in known]


def _deflated_newton(ops, u, known, shift=1.0):
    # Newton on M(u) J'(u) with M = prod(1/|u - u_k|^2 + shift); the deflated
    # step is the Newton step divided by 1 - dlog M(step).
    for iteration in range(50):
        R = ops.weak_gradient(u)
        residual = ops.residual(u)
        if residual <= settings.tolerances['solve']:
            return u, iteration
        step = -Linearization(ops, u).solve(R)
        slope = 0.0
        for item in known:
            difference = u - item.field
            distance2 = ops.inner_mu(difference, difference)
            if distance2 == 0:
                return None, iteration
            factor = 1.0 / distance2 + shift
            slope += -2.0 * ops.inner_mu(difference, step) / \
                (distance2 ** 2 * factor)
        denominator = 1.0 - slope
        if abs(denominator) < 1e-12:
            return None, iteration
        step = step / denominator
        limit = max(1.0, ops.norm_mu(u))
        length = ops.norm_mu(step)
        if length > limit:
            step *= limit / length
        u = u + step
        if not np.all(np.isfinite(u)) or ops.norm_mu(u) > 1e6:
            return None, iteration
    return None, 50


def deflated_search(grid, spec, known, seed=None, starts=None, ops=None):
    """Look for a critical point different from every ``known`` one.

    Starts are rescaled copies of the known fields and seeded smooth
    nonnegative fields at the scale of the known ones. A point found on the
    deflated residual is re-polished on the plain residual and accepted only
    when it lies at least ``1e-3 max(1, |u_k|_mu)`` away from each known
    solution.

    :param list known: Non-empty list of :class:`SolveResult`.
    :returns: :class:`SolveResult` or None.
    """
    if not known:
        raise SolverError('deflated_search needs at least one known solution')
    ops = ops or operators(grid, spec)
    seed = settings.default_seed if seed is None else seed
    starts = starts or settings.iteration_caps['deflation_starts']
    separation = settings.tolerances['dedup']

    norms = [item.norm_mu for item in known if item.norm_mu > 0]
    reference = max(norms) if norms else 1.0
    candidates = []
    for item in known:
        if item.norm_mu > 0:
            candidates.extend([0.5 * item.field, 1.5 * item.field])
    index = 0
    while len(candidates) < starts:
        field = smooth_field(grid, seed, 'deflated_search', index)
        norm = ops.norm_mu(field)
        scale = reference * (0.5, 1.0, 2.0)[index % 3] / norm
        candidates.append(scale * field)
        index += 1

    for number, start in enumerate(candidates[:starts]):
        field, iterations = _deflated_newton(ops, np.abs(start), known)
        if field is None:
            continue
        try:
            result = newton_refine(grid, spec, field, 'refined', ops,
                                   iterations)
        except SolverError as error:
            log.info('deflated_search: start {} rejected ({})'.format(
                number, error))
            continue
        if min(_separation(ops, result.field, known)) < separation:
            continue
        result.extras['deflation_start'] = number
        log.info_json('deflated_search', result.to_dict())
        return result
    return None


def is_trivial(result):
    return result.norm_mu <= 1e-8
