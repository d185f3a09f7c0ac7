"""
Weighted eigenproblems.

Every problem here is the symmetric pencil ``F v = nu M v`` with ``M`` the
Gram matrix of the energy inner product (stiffness on Omega, or the
``<.,.>_mu`` form on the whole grid) and ``F = diag(w f)`` the possibly
indefinite weight. The eigenvalues of the Rayleigh quotient
``v.M.v / v.F.v`` over the cone ``{v.F.v > 0}`` are the reciprocals of the
positive ``nu``, so the principal value is ``1 / nu_max``. Small pencils are
solved densely; larger ones with Lanczos on ``M^-1 F`` using one sparse LU of
``M``.
"""
from collections import OrderedDict

import numpy as np
from scipy import linalg, sparse
from scipy.sparse.linalg import LinearOperator, eigsh, splu

from kirchwell import log, settings
from kirchwell.errors import ConditionError, SolverError
from kirchwell.functional import Operators, dual_norm

#: Pencils up to this size are solved with dense ``scipy.linalg.eigh``.
DENSE_LIMIT = 1500

#: Columns of the mu-convergence scan.
SCAN_COLUMNS = ('mu', 'lambda1_mu', 'lambda2_mu', 'gap1', 'eigfield_dist')


class EigenPair(object):

    """One normalized eigenpair.

    :ivar float value: The eigenvalue.
    :ivar numpy.ndarray field: Eigenfield on the full grid, ``f_mass = 1``.
    :ivar float residual: Dual norm of ``M u - value W f u``.
    :ivar float f_mass: ``integral f u^2``.
    :ivar float orth: Constraint inner product with the first eigenfield
        (0.0 for principal pairs).
    """

    def __init__(self, value, field, residual, f_mass, orth=0.0, kind=None):
        self.value = float(value)
        self.field = field
        self.residual = float(residual)
        self.f_mass = float(f_mass)
        self.orth = float(orth)
        self.kind = kind

    def to_dict(self):
        return OrderedDict([
            ('kind', self.kind),
            ('value', self.value),
            ('residual', self.residual),
            ('f_mass', self.f_mass),
            ('orth', self.orth),
        ])

    def __repr__(self):
        return 'EigenPair({}={:.10g}, residual={:.3g})'.format(
            self.kind, self.value, self.residual)


class _Pencil(object):

    # M and F restricted to the active nodes, plus what is needed to lift a
    # restricted vector back to the grid and measure its residual.

    def __init__(self, grid, M, weight, mask, dual, solve=None):
        self.grid = grid
        self.mask = mask
        self.M = sparse.csc_matrix(M)
        self.weight = weight
        self.dual = dual
        self.size = self.M.shape[0]
        self._solve = solve

    def solve(self, b):
        if self._solve is None:
            self._solve = splu(self.M).solve
        return self._solve(b)

    def lift(self, vector):
        return self.grid.embed(vector, self.mask)


def _restrict(matrix, mask):
    matrix = sparse.csr_matrix(matrix)
    return matrix[mask][:, mask]


def _largest(pencil, count, constraint=None):
    """Largest ``count`` eigenvalues of ``P^T F P v = nu M v``.

    ``P`` projects M-orthogonally away from ``constraint`` when one is
    given, so the constrained maximizers are the top pairs of this pencil.
    """
    F = pencil.weight
    M = pencil.M
    if constraint is not None:
        Mc = M.dot(constraint)
        scale = float(np.dot(constraint, Mc))
        if not scale > 0:
            raise SolverError(
                'eigen: constraint field has zero energy norm, the '
                'projection is degenerate')

        def project(x):
            return x - constraint * (np.dot(Mc, x) / scale)

        def project_t(x):
            return x - Mc * (np.dot(constraint, x) / scale)
    else:
        def project(x):
            return x
        project_t = project

    if pencil.size <= DENSE_LIMIT:
        A = np.diag(F)
        if constraint is not None:
            P = np.eye(pencil.size) - np.outer(constraint, Mc) / scale
            A = P.T.dot(A).dot(P)
        values, vectors = linalg.eigh(A, M.toarray())
        order = np.argsort(values)[::-1][:count]
        return values[order], vectors[:, order]

    A = LinearOperator(
        M.shape, matvec=lambda x: project_t(F * project(x)), dtype=float)
    Minv = LinearOperator(M.shape, matvec=pencil.solve, dtype=float)
    # Deterministic start vector: the weight itself, clipped to the active
    # side.
    v0 = np.maximum(F, 0.0) + 1e-3
    values, vectors = eigsh(A, k=count, M=M, Minv=Minv, which='LA',
                            v0=project(v0), tol=1e-13,
                            maxiter=50 * pencil.size)
    order = np.argsort(values)[::-1]
    return values[order], vectors[:, order]


def _normalized(pencil, nu, vector, kind, constraint_full=None,
                constraint_matrix=None):
    if not nu > 0:
        raise ConditionError(
            '{}: no field with integral f u^2 > 0 exists on the active '
            'nodes (D1)'.format(kind))
    full = pencil.lift(vector)
    f_full = np.zeros(pencil.grid.size)
    f_full[pencil.mask] = pencil.weight
    mass = float(np.dot(f_full, full * full))
    full = full / np.sqrt(mass)
    if full[np.argmax(np.abs(full))] < 0:
        full = -full

    value = 1.0 / nu
    u = full[pencil.mask]
    R = pencil.M.dot(u) - value * pencil.weight * u
    residual = dual_norm(pencil.dual, R, operation=kind)
    orth = 0.0
    if constraint_full is not None:
        orth = float(np.dot(constraint_full[pencil.mask],
                            constraint_matrix.dot(u)))
    pair = EigenPair(value, full, residual,
                     float(np.dot(f_full, full * full)), orth, kind)
    if not pair.residual <= settings.tolerances['eigen']:
        log.warn_json(kind, {'residual': pair.residual,
                             'tolerance': settings.tolerances['eigen']})
        raise SolverError('{}: residual {:.3g} above {:.3g}'.format(
            kind, pair.residual, settings.tolerances['eigen']))
    log.info_json(kind, pair.to_dict())
    return pair


def _omega_pencil(grid, f, omega):
    values = grid.check(f)
    mask = np.ones(grid.size, dtype=bool) if omega is None else \
        np.asarray(omega, dtype=bool)
    if not np.any(mask):
        raise ConditionError('eigen: Omega contains no grid node')
    K = _restrict(grid.stiffness, mask)
    weights = grid.weights[mask]
    dual = sparse.csr_matrix(K + sparse.diags(weights))
    return _Pencil(grid, K, weights * values[mask], mask, dual)


def _mu_pencil(grid, spec):
    ops = Operators.for_problem(grid, spec)
    mask = np.ones(grid.size, dtype=bool)
    return _Pencil(grid, ops.metric, ops.w * ops.f, mask, ops.dual,
                   solve=ops.metric_solve)


def lambda1_omega(grid, f, omega=None):
    """Principal eigenpair of ``-Delta u = lambda f u`` in ``H0^1(Omega)``.

    :param f: Nodal values of the weight.
    :param omega: Boolean node mask of Omega; the whole grid when None.
    :raises ConditionError: when f+ vanishes on Omega.
    :returns: :class:`EigenPair`
    """
    pencil = _omega_pencil(grid, f, omega)
    values, vectors = _largest(pencil, 1)
    return _normalized(pencil, values[0], vectors[:, 0], 'lambda1_omega')


def lambda2_omega(grid, f, phi1, omega=None):
    """Minimum of the quotient over fields with ``integral grad u . grad
    phi1 = 0``.

    :raises SolverError: when ``phi1`` has no energy on Omega.
    """
    pencil = _omega_pencil(grid, f, omega)
    constraint = grid.check(phi1)[pencil.mask]
    values, vectors = _largest(pencil, 1, constraint)
    return _normalized(pencil, values[0], vectors[:, 0], 'lambda2_omega',
                       grid.check(phi1), pencil.M)


def lambda1_mu(grid, spec, mu=None):
    """Principal eigenpair of ``-Delta u + mu V u = lambda f u`` on the whole
    truncated domain.

    :param mu: Well depth; ``spec.mu`` when None.
    """
    spec = _with_mu(spec, mu)
    pencil = _mu_pencil(grid, spec)
    values, vectors = _largest(pencil, 1)
    return _normalized(pencil, values[0], vectors[:, 0], 'lambda1_mu')


def lambda2_mu(grid, spec, phi1_mu, mu=None):
    """Second eigenvalue, with ``<u, phi_{1,mu}>_mu = 0``."""
    spec = _with_mu(spec, mu)
    pencil = _mu_pencil(grid, spec)
    constraint = grid.check(phi1_mu)
    values, vectors = _largest(pencil, 1, constraint)
    return _normalized(pencil, values[0], vectors[:, 0], 'lambda2_mu',
                       constraint, pencil.M)


def _with_mu(spec, mu):
    if mu is None or float(mu) == spec.mu:
        return spec
    return spec.copy(mu=mu)


def omega_pairs(grid, spec):
    """``(lambda1(f_Omega), lambda2(f_Omega))`` pairs of a problem, cached on
    the spec."""
    cache = spec.__dict__.setdefault('_eigen', {})
    key = ('omega', grid.id)
    if key not in cache:
        data = spec.nodal(grid)
        first = lambda1_omega(grid, data.f, data.omega)
        second = lambda2_omega(grid, data.f, first.field, data.omega)
        cache[key] = (first, second)
    return cache[key]


def mu_pairs(grid, spec):
    """``(lambda_{1,mu}, lambda_{2,mu})`` pairs at ``spec.mu``, cached."""
    cache = spec.__dict__.setdefault('_eigen', {})
    key = ('mu', grid.id)
    if key not in cache:
        first = lambda1_mu(grid, spec)
        second = lambda2_mu(grid, spec, first.field)
        cache[key] = (first, second)
    return cache[key]


def mu_convergence_scan(spec, mu_list, grid=None):
    """Principal values across a list of well depths.

    :param list mu_list: Increasing well depths.
    :returns: list of OrderedDict rows keyed by :data:`SCAN_COLUMNS`;
        ``eigfield_dist`` is the Dirichlet seminorm of
        ``phi_{1,mu} - phi_1``.
    """
    grid = grid or spec.build_grid()
    phi1 = omega_pairs(grid, spec)[0]
    rows = []
    for mu in mu_list:
        first, second = mu_pairs(grid, _with_mu(spec, mu))
        difference = first.field - phi1.field
        row = OrderedDict()
        row['mu'] = float(mu)
        row['lambda1_mu'] = first.value
        row['lambda2_mu'] = second.value
        row['gap1'] = phi1.value - first.value
        row['eigfield_dist'] = np.sqrt(max(
            float(np.dot(difference, grid.stiffness.dot(difference))), 0.0))
        rows.append(row)
        log.info_json('mu_convergence_scan', row)
    return rows
