"""
The Kirchhoff energy

    J(u) = a/4 |u|_D^4 + 1/2 |u|_mu^2 - lambda/2 int f u^2 - 1/p int g |u|^p

with |u|_D^2 = int |grad u|^2 and |u|_mu^2 = int (|grad u|^2 + mu V u^2),
its first derivative and the dual residual norm every solver reports.

All forms are assembled from the grid's stiffness matrix ``K`` and
quadrature weights ``w``; :class:`Operators` keeps the pieces for one
(grid, problem) pair together with the factorizations the solvers reuse.
"""
import numpy as np
from scipy import sparse
from scipy.sparse.linalg import LinearOperator, splu

from kirchwell import settings
from kirchwell.compatability import _cg
from kirchwell.errors import SolverError


class EnergyBreakdown(object):

    """Parts of J at one field.

    ``total = dirichlet4 + mu_half - f_term - g_term``; ``dirichlet`` is
    |u|_D^2 and ``norm_mu_sq`` is |u|_mu^2.
    """

    def __init__(self, dirichlet, norm_mu_sq, f_term, g_term, a):
        self.dirichlet = dirichlet
        self.norm_mu_sq = norm_mu_sq
        self.dirichlet4 = 0.25 * a * dirichlet ** 2
        self.mu_half = 0.5 * norm_mu_sq
        self.f_term = f_term
        self.g_term = g_term
        self.total = self.dirichlet4 + self.mu_half - self.f_term - \
            self.g_term

    def to_dict(self):
        return {
            'dirichlet4': self.dirichlet4,
            'mu_half': self.mu_half,
            'f_term': self.f_term,
            'g_term': self.g_term,
            'total': self.total,
        }


def power(u, q):
    """|u|^q, zero where u is zero."""
    magnitude = np.abs(u)
    out = np.zeros_like(magnitude)
    nonzero = magnitude > 0
    out[nonzero] = np.exp(q * np.log(magnitude[nonzero]))
    return out


def jacobi(matrix):
    """Diagonal preconditioner as a LinearOperator."""
    inverse = 1.0 / matrix.diagonal()
    return LinearOperator(matrix.shape, matvec=lambda x: inverse * x)


def dual_norm(matrix, R, preconditioner=None, operation='residual_norm'):
    """sqrt(R . matrix^-1 R) for an SPD ``matrix``, by preconditioned CG.

    :raises SolverError: when CG hits its iteration cap.
    """
    if not np.any(R):
        return 0.0
    if preconditioner is None:
        preconditioner = jacobi(matrix)
    z, info = _cg(matrix, R, rtol=settings.tolerances['cg'],
                  maxiter=settings.iteration_caps['cg'], M=preconditioner)
    if info != 0:
        raise SolverError(
            '{}: conjugate gradients did not converge in {} iterations; '
            'loosen [Solver] cg or coarsen the grid'.format(
                operation, settings.iteration_caps['cg']))
    return np.sqrt(max(float(np.dot(R, z)), 0.0))


class Operators(object):

    """Assembled forms for one grid and one problem.

    ``metric`` is the Gram matrix of <.,.>_mu, ``dual`` the preconditioner
    -Delta + mu V + I in weak form. Both are factorized lazily. ``lam`` can
    be swapped with :meth:`with_lambda` without refactorizing.
    """

    def __init__(self, grid, spec, lam=None):
        data = spec.nodal(grid)
        self.grid = grid
        self.spec = spec
        self.a = spec.a
        self.p = spec.p
        self.mu = spec.mu
        self.lam = spec.lam if lam is None else float(lam)
        self.K = grid.stiffness
        self.w = grid.weights
        self.V = data.V
        self.f = data.f
        self.g = data.g
        self.omega = data.omega
        self.potential = self.w * self.mu * self.V
        self.metric = sparse.csc_matrix(
            self.K + sparse.diags(self.potential))
        self.dual = sparse.csr_matrix(
            self.K + sparse.diags(self.potential + self.w))
        self._metric_lu = None
        self._dual_jacobi = None

    @classmethod
    def for_problem(cls, grid, spec):
        """Operators cached on the spec, one per grid."""
        cache = spec.__dict__.setdefault('_operators', {})
        if grid.id not in cache:
            cache[grid.id] = cls(grid, spec)
        return cache[grid.id]

    def with_lambda(self, lam):
        """Shallow copy with another lambda; factorizations are shared."""
        other = Operators.__new__(Operators)
        other.__dict__.update(self.__dict__)
        other.lam = float(lam)
        return other

    # Norms.

    def dirichlet(self, u):
        return float(np.dot(u, self.K.dot(u)))

    def inner_mu(self, u, v):
        return float(np.dot(u, self.metric.dot(v)))

    def norm_mu(self, u):
        return np.sqrt(max(self.inner_mu(u, u), 0.0))

    def metric_solve(self, b):
        """Solve metric x = b (Riesz map of <.,.>_mu)."""
        if self._metric_lu is None:
            self._metric_lu = splu(self.metric)
        return self._metric_lu.solve(b)

    # Energy and derivatives.

    def energy(self, u):
        dirichlet = self.dirichlet(u)
        norm_mu_sq = dirichlet + float(np.dot(self.potential, u * u))
        f_term = 0.5 * self.lam * float(np.dot(self.w, self.f * u * u))
        g_term = float(np.dot(self.w, self.g * power(u, self.p))) / self.p
        return EnergyBreakdown(dirichlet, norm_mu_sq, f_term, g_term, self.a)

    def weak_gradient(self, u, dirichlet=None):
        """Vector R with R.phi = <J'(u), phi> for every nodal phi."""
        if dirichlet is None:
            dirichlet = self.dirichlet(u)
        Ku = self.K.dot(u)
        local = self.w * ((self.mu * self.V - self.lam * self.f) * u -
                          self.g * power(u, self.p - 1.0) * np.sign(u))
        return (self.a * dirichlet + 1.0) * Ku + local

    def dual_norm(self, R):
        """sqrt(R . (-Delta + mu V + I)^-1 R) in weak form."""
        if self._dual_jacobi is None:
            self._dual_jacobi = jacobi(self.dual)
        return dual_norm(self.dual, R, self._dual_jacobi)

    def residual(self, u):
        return self.dual_norm(self.weak_gradient(u))


def energy(grid, spec, u):
    """:returns: :class:`EnergyBreakdown` of J at ``u``."""
    values = grid.check(u)
    return Operators.for_problem(grid, spec).energy(values)


def directional_derivative(grid, spec, u, phi):
    """<J'(u), phi>, exact for the discrete energy."""
    values = grid.check(u)
    direction = grid.check(phi)
    ops = Operators.for_problem(grid, spec)
    return float(np.dot(ops.weak_gradient(values), direction))


def gradient_field(grid, spec, u):
    """Nodal residual of the strong equation,
    (a|u|_D^2 + 1)(-Delta u) + mu V u - lambda f u - g |u|^(p-2) u."""
    values = grid.check(u)
    ops = Operators.for_problem(grid, spec)
    return ops.weak_gradient(values) / grid.weights


def residual_norm(grid, spec, u):
    """Dual norm of the residual with the preconditioner -Delta + mu V + I.

    :raises SolverError: when the inner CG does not converge.
    """
    values = grid.check(u)
    return Operators.for_problem(grid, spec).residual(values)


def nehari(grid, spec, u):
    """<J'(u), u>; vanishes at every critical point."""
    return directional_derivative(grid, spec, u, u)
