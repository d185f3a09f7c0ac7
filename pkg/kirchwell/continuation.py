"""
Pseudo-arclength continuation of solution branches in lambda.

The unknown is the pair (u, lambda). The predictor follows the tangent of the
branch, the corrector is Newton on the bordered system

    [ H        F_lambda ] [du     ]     [ R(u, lambda) ]
    [ <t_u,.>  t_lambda ] [dlambda] = - [ arclength    ]

with H the linearization of J' (its rank-one nonlocal part handled by
Sherman-Morrison inside :class:`~kirchwell.solvers.newton.Linearization`) and
``F_lambda = -w f u``. Folds are the points where the lambda component of
the tangent changes sign.
"""
from collections import OrderedDict

import numpy as np

from kirchwell import log, settings
from kirchwell.eigen import omega_pairs
from kirchwell.errors import ContinuationError, SolverError
from kirchwell.functional import Operators
from kirchwell.solvers.census import multiplicity_census
from kirchwell.solvers.newton import Linearization, newton_refine

#: Columns of the bifurcation CSV.
CSV_COLUMNS = ('a', 'lambda', 'norm_mu', 'energy', 'branch_id', 'fold_flag',
               'residual')

#: Corrector halvings before a step is abandoned.
MAX_HALVINGS = 5


class BranchPoint(object):

    """One corrected point of a branch."""

    def __init__(self, lam, norm_mu, energy, residual, eigenvalue,
                 tangent_lambda, fold_flag=False, field=None):
        self.lam = float(lam)
        self.norm_mu = float(norm_mu)
        self.energy = float(energy)
        self.residual = float(residual)
        self.eigenvalue = eigenvalue
        self.tangent_lambda = float(tangent_lambda)
        self.fold_flag = fold_flag
        self.field = field

    def to_dict(self):
        return OrderedDict([
            ('lambda', self.lam),
            ('norm_mu', self.norm_mu),
            ('energy', self.energy),
            ('residual', self.residual),
            ('smallest_eigenvalue', self.eigenvalue),
            ('tangent_lambda', self.tangent_lambda),
            ('fold_flag', self.fold_flag),
        ])

    def __repr__(self):
        return 'BranchPoint(lambda={:.6g}, norm={:.6g}{})'.format(
            self.lam, self.norm_mu, ', fold' if self.fold_flag else '')


def smallest_eigenvalue(ops, u, steps=20):
    """Eigenvalue of the linearization closest to zero, relative to the
    ``<.,.>_mu`` metric, from a few inverse-iteration steps."""
    try:
        linearization = Linearization(ops, u)
    except SolverError:
        return 0.0
    x = np.array(u, dtype=float) + 1e-3 * ops.w
    x /= ops.norm_mu(x)
    for _ in range(steps):
        y = linearization.solve(ops.metric.dot(x))
        norm = ops.norm_mu(y)
        if norm == 0 or not np.isfinite(norm):
            return 0.0
        x = y / norm
    return float(np.dot(x, linearization.dot(x))) / ops.inner_mu(x, x)


class _Bordered(object):

    # Linearization at (u, lambda) with the lambda derivative as extra column.

    def __init__(self, ops, u):
        self.linearization = Linearization(ops, u)
        self.column = -ops.w * ops.f * u
        self._column_solve = self.linearization.solve(self.column)

    def tangent(self, ops, previous):
        # [H F_l; <t_u,.> t_l] t = [0; 1]
        u_part = -self._column_solve
        length = np.sqrt(ops.inner_mu(u_part, u_part) + 1.0)
        t_u, t_l = u_part / length, 1.0 / length
        if previous is not None and \
                ops.inner_mu(t_u, previous[0]) + t_l * previous[1] < 0:
            t_u, t_l = -t_u, -t_l
        return t_u, t_l

    def solve(self, ops, R, arclength, t_u, t_l):
        x1 = self.linearization.solve(R)
        c_x1 = ops.inner_mu(t_u, x1)
        c_x2 = ops.inner_mu(t_u, self._column_solve)
        denominator = t_l - c_x2
        if abs(denominator) < 1e-14:
            raise SolverError('continuation: singular bordered system')
        d_lambda = (c_x1 - arclength) / denominator
        d_u = -x1 - self._column_solve * d_lambda
        return d_u, d_lambda


def _correct(ops, u, lam, predicted, t_u, t_l):
    # Newton on (R = 0, <t, x - x_pred> = 0).
    tolerance = settings.tolerances['corrector']
    for iteration in range(1, 16):
        current = ops.with_lambda(lam)
        R = current.weak_gradient(u)
        arclength = ops.inner_mu(t_u, u - predicted[0]) + \
            t_l * (lam - predicted[1])
        bordered = _Bordered(current, u)
        d_u, d_lambda = bordered.solve(current, R, arclength, t_u, t_l)
        u = u + d_u
        lam = lam + d_lambda
        if not np.all(np.isfinite(u)):
            break
        residual = ops.with_lambda(lam).residual(u)
        if residual <= tolerance * 1e-2:
            return u, lam, residual, iteration
    residual = ops.with_lambda(lam).residual(u) if np.all(np.isfinite(u)) \
        else np.inf
    if residual <= tolerance:
        return u, lam, residual, iteration
    raise SolverError(
        'continuation: corrector stopped at residual {:.3g}'.format(residual))


def _point(ops, u, lam, t_l, keep_field):
    current = ops.with_lambda(lam)
    return BranchPoint(lam, current.norm_mu(u), current.energy(u).total,
                       current.residual(u), smallest_eigenvalue(current, u),
                       t_l, field=u if keep_field else None)


def trace_branch(spec, lam_range, seed_result, grid=None, max_points=None,
                 keep_every=10):
    """Follow the branch through ``seed_result`` across ``lam_range``.

    The step length lives in ``[1e-4, 0.05] * lambda1`` and grows after fast
    corrections. Tracing stops when lambda leaves the range, the step
    underflows or the point budget is spent.

    :param tuple lam_range: ``(start, end)``; the seed solves the problem at
        ``start``.
    :param int keep_every: Keep the field of every n-th point.
    :raises ContinuationError: when the corrector fails after 5 halvings.
    :returns: list of :class:`BranchPoint`
    """
    grid = grid or spec.build_grid()
    start, end = float(lam_range[0]), float(lam_range[1])
    max_points = max_points or settings.iteration_caps['branch_points']
    ops = Operators.for_problem(grid, spec)
    lambda1 = omega_pairs(grid, spec)[0].value
    low, high = min(start, end), max(start, end)
    smallest, largest = 1e-4 * lambda1, 0.05 * lambda1

    u = np.array(getattr(seed_result, 'field', seed_result), dtype=float)
    lam = start
    if start == end:
        return [_point(ops, u, lam, 0.0, True)]

    bordered = _Bordered(ops.with_lambda(lam), u)
    t_u, t_l = bordered.tangent(ops, None)
    if (t_l > 0) != (end > start):
        t_u, t_l = -t_u, -t_l

    points = [_point(ops, u, lam, t_l, True)]
    ds = 0.01 * lambda1
    while len(points) < max_points:
        for halving in range(MAX_HALVINGS + 1):
            predicted = (u + ds * t_u, lam + ds * t_l)
            try:
                u_new, lam_new, _, iterations = _correct(
                    ops, predicted[0].copy(), predicted[1], predicted, t_u,
                    t_l)
                break
            except SolverError as error:
                log.info('trace_branch: halving step {:.3g} ({})'.format(
                    ds, error))
                ds *= 0.5
                if ds < smallest:
                    log.warn('trace_branch: step underflow at lambda '
                             '{:.6g}'.format(lam))
                    return _flag_folds(points)
        else:
            raise ContinuationError(
                'trace_branch: corrector diverged after {} halvings at '
                'lambda {:.6g}'.format(MAX_HALVINGS, lam))

        if not low <= lam_new <= high:
            break
        previous = (t_u, t_l)
        u, lam = u_new, lam_new
        t_u, t_l = _Bordered(ops.with_lambda(lam), u).tangent(ops, previous)
        keep = len(points) % keep_every == 0
        points.append(_point(ops, u, lam, t_l, keep))
        if iterations <= 3:
            ds = min(ds * 1.5, largest)
        log.progress()

    log.progress('', True)
    return _flag_folds(points)


def _flag_folds(points):
    for previous, point in zip(points[:-1], points[1:]):
        point.fold_flag = (previous.tangent_lambda > 0) != \
            (point.tangent_lambda > 0)
    return points


def folds(points):
    """Lambda values where the branch turns."""
    return [point.lam for point in points if point.fold_flag]


def branches(rows):
    """Diagram rows grouped by ``branch_id``, each in tracing order."""
    grouped = OrderedDict()
    for row in rows:
        grouped.setdefault(row['branch_id'], []).append(row)
    return grouped


def lower_branch(rows):
    """Rows of the branch whose seed has the smallest ``norm_mu``."""
    grouped = branches(rows)
    if not grouped:
        return []
    return min(grouped.values(), key=lambda branch: branch[0]['norm_mu'])


def before_fold(branch):
    """Rows of a branch strictly before its first fold."""
    for index, row in enumerate(branch):
        if row['fold_flag']:
            return branch[:index]
    return list(branch)


def bifurcation_diagram(spec, lam_grid, a_list, grid=None, seed=None):
    """Rows of the (lambda, |u|_mu) diagram for every a in ``a_list``.

    Each census solution at the first lambda seeds a branch unless an earlier
    branch already passed through it.

    :returns: list of OrderedDict rows keyed by :data:`CSV_COLUMNS`
    """
    rows = []
    lam_grid = list(lam_grid)
    if not lam_grid:
        return rows
    grid = grid or spec.build_grid()
    lam_range = (lam_grid[0], lam_grid[-1])
    branch_id = 0
    for a in a_list:
        current = spec.copy(a=a, lam=lam_range[0])
        ops = Operators.for_problem(grid, current)
        census = multiplicity_census(current, grid=grid, seed=seed,
                                     ladder=False)
        traced = []
        for solution in census:
            if any(ops.norm_mu(solution.field - field) <=
                   settings.tolerances['dedup'] * max(1.0, solution.norm_mu)
                   for field in traced):
                continue
            try:
                points = trace_branch(current, lam_range, solution, grid)
            except (ContinuationError, SolverError) as error:
                log.warn('bifurcation_diagram: a={} {}'.format(a, error))
                continue
            traced.extend(point.field for point in points
                          if point.field is not None)
            for point in points:
                rows.append(OrderedDict([
                    ('a', float(a)),
                    ('lambda', point.lam),
                    ('norm_mu', point.norm_mu),
                    ('energy', point.energy),
                    ('branch_id', branch_id),
                    ('fold_flag', int(point.fold_flag)),
                    ('residual', point.residual),
                ]))
            branch_id += 1
    return rows


def plot_diagram(rows, pyplot):
    """Scatter of lambda against |u|_mu, folds marked; None without rows."""
    if not rows:
        return None
    figure, axes = pyplot.subplots(figsize=(6, 4))
    for key in sorted(set((row['a'], row['branch_id']) for row in rows)):
        branch = [row for row in rows
                  if (row['a'], row['branch_id']) == key]
        axes.plot([row['lambda'] for row in branch],
                  [row['norm_mu'] for row in branch], '.-', markersize=2,
                  label='a={:.4g} #{}'.format(*key))
        turning = [row for row in branch if row['fold_flag']]
        axes.plot([row['lambda'] for row in turning],
                  [row['norm_mu'] for row in turning], 'kx')
    axes.set_xlabel('lambda')
    axes.set_ylabel('|u|_mu')
    axes.legend(fontsize='small')
    return figure
