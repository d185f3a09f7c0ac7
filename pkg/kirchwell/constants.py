"""
Closed-form constants and thresholds of the indefinite Kirchhoff problem.

Formula helpers take plain numbers so they can be checked on their own; the
``thresholds_*`` and ``coercivity_constants`` functions assemble them from a
problem, its eigenvalues and the discrete norms of its data, and
:func:`build_report` gathers everything into a :class:`ConstantsReport`.
Constants that do not apply to the problem's regime are None, never NaN.

Conventions: ``S`` is normalized by ``|u|_{2*} <= S^-1 |u|_D`` (so the
powers ``S^p`` below are not squared), and the Caffarelli-Kohn-Nirenberg
constant of the N = 3 coercivity bound is the Hardy constant
``(2/(N-2))^2``.
"""
from collections import OrderedDict

import numpy as np
from scipy import sparse
from scipy.optimize import minimize_scalar
from scipy.sparse.linalg import splu
from scipy.special import gamma

from kirchwell import log, settings
from kirchwell.errors import ConditionError, GridError, ProblemError
from kirchwell.functional import power
from kirchwell.grid import GridSpec, build_grid, unit_sphere_area
from kirchwell.problem.base import critical_exponent
from kirchwell.seeding import smooth_field

#: Conventions recorded in every report.
CONVENTIONS = OrderedDict([
    ('sobolev_normalization', '|u|_{2*} <= S^-1 |u|_D'),
    ('C_bar_0', 'Hardy constant (2/(N-2))^2'),
    ('Gamma_p', 'lower bound from projected ascent'),
    ('norms', 'nodal maxima and quadrature on the problem grid'),
])


class ConstantsReport(object):

    """Every constant of one problem. Missing or inapplicable entries are
    None."""

    fields = (
        'S', 'mu0', 'mu1', 'mu0_N3', 'Gamma_p', 'a0_p', 'lambda_a_plus',
        'rho_lambda', 'rho_a', 'rho_a_lambda', 'delta_a_mu', 'delta_a', 'C1',
        'C2', 'rho_bar_lambda', 'rho_bar_a', 'rho_bar_a_lambda', 'rho0', 'B',
        'delta_bar_a_mu', 'delta_bar_a', 'C3', 'C4', 'rho_hat_a',
        'rho_hat_a_lambda', 'Lambda0', 'theta1_mu', 'theta2_mu',
        'C_N_a_lambda', 'C_bar_0', 'D0', 'd0_bound', 't_a',
        'measure_V_lt_c0', 'g_sup', 'f_norm_N2', 'g_phi1_p', 'lambda1',
        'lambda2', 'lambda1_mu', 'lambda2_mu',
    )

    def __init__(self, **values):
        self.values = OrderedDict((name, None) for name in self.fields)
        self.regime = None
        self.update(**values)

    def update(self, **values):
        for name, value in values.items():
            if name not in self.values:
                raise KeyError('unknown constant {}'.format(name))
            self.values[name] = _finite(value)
        return self

    def __getattr__(self, name):
        values = self.__dict__.get('values')
        if values is not None and name in values:
            return values[name]
        raise AttributeError(name)

    def to_dict(self):
        payload = OrderedDict(self.values)
        payload['regime'] = None if self.regime is None else \
            self.regime.to_dict()
        payload['conventions'] = CONVENTIONS
        return payload


def _finite(value):
    if value is None:
        return None
    value = float(value)
    if not np.isfinite(value):
        return None
    return value


class Regime(object):

    """Which existence statement applies and what the census should find.

    :ivar str name: ``thm1-i``, ``thm1-ii``, ``thm2-i``, ``thm2-ii-1``,
        ``thm2-ii-2``, ``thm3`` or ``none``.
    :ivar int predicted: Guaranteed number of positive solutions.
    :ivar tuple searches: Solver classifications expected to produce them.
    :ivar tuple signs: Expected energy signs, one per search.
    :ivar str radius: Name of the sphere radius the geometry uses.
    """

    def __init__(self, name, predicted, searches=(), signs=(), radius=None):
        self.name = name
        self.predicted = predicted
        self.searches = tuple(searches)
        self.signs = tuple(signs)
        self.radius = radius

    def to_dict(self):
        return OrderedDict([
            ('name', self.name),
            ('predicted', self.predicted),
            ('searches', list(self.searches)),
            ('signs', list(self.signs)),
            ('radius', self.radius),
        ])

    def __repr__(self):
        return 'Regime({}, predicted={})'.format(self.name, self.predicted)


# Sobolev and Hardy constants.

def sobolev_constant(N):
    """Best constant of ``|u|_{2*} <= S^-1 |u|_D`` in ``R^N``.

    :raises ProblemError: for N < 3.
    """
    if N < 3:
        raise ProblemError('sobolev_constant needs N >= 3 (got {})'.format(N))
    return np.sqrt(np.pi * N * (N - 2.0)) * \
        (gamma(N / 2.0) / gamma(float(N))) ** (1.0 / N)


def sobolev_oracle(N, nodes=40001, half_length=1.0):
    """Discrete Sobolev quotient ``|u|_D / |u|_{2*}`` minimized over truncated
    bubbles ``(eps^2 + r^2)^(-(N-2)/2) - (eps^2 + L^2)^(-(N-2)/2)`` on a fine
    radial grid.

    :returns: tuple(float, float) with the quotient and the optimal eps.
    """
    if N < 3:
        raise ProblemError('sobolev_oracle needs N >= 3 (got {})'.format(N))
    grid = build_grid(GridSpec(N, half_length, nodes, 'radial'))
    r = grid.radius
    exponent = critical_exponent(N)
    decay = (N - 2.0) / 2.0

    def quotient(log_eps):
        eps2 = np.exp(2.0 * log_eps)
        u = (eps2 + r ** 2) ** -decay - (eps2 + half_length ** 2) ** -decay
        dirichlet = float(np.dot(u, grid.stiffness.dot(u)))
        return np.sqrt(dirichlet) / grid.lebesgue_norm(u, exponent)

    bounds = (np.log(100.0 * grid.h), np.log(0.05 * half_length))
    if not bounds[0] < bounds[1]:
        raise GridError('sobolev_oracle: grid too coarse for L={}'.format(
            half_length))
    found = minimize_scalar(quotient, bounds=bounds, method='bounded',
                            options={'xatol': 1e-6})
    return float(found.fun), float(np.exp(found.x))


def hardy_constant(N):
    """``(2/(N-2))^2``, used for the Caffarelli-Kohn-Nirenberg constant."""
    return (2.0 / (N - 2.0)) ** 2


# Discrete norms of the problem data.

class ProblemNorms(object):

    """Norms of V, f and g on the problem grid.

    :ivar float g_sup: ``max |g|``.
    :ivar float measure: ``|{V < c0}|``.
    :ivar float f_norm_N2: ``|f|_{N/2}``.
    """

    def __init__(self, g_sup, measure, f_norm_N2):
        self.g_sup = g_sup
        self.measure = measure
        self.f_norm_N2 = f_norm_N2


def problem_norms(grid, spec):
    data = spec.nodal(grid)
    return ProblemNorms(
        float(np.max(np.abs(data.g))),
        grid.measure(data.V < spec.c0),
        grid.lebesgue_norm(data.f, spec.N / 2.0))


def g_phi1_integral(grid, spec, phi1):
    """``integral_Omega g phi1^p``."""
    data = spec.nodal(grid)
    values = grid.check(phi1)
    return float(np.dot(grid.weights * data.omega,
                        data.g * power(values, spec.p)))


# Gamma_p.

class GammaEstimate(object):

    """Lower estimate of Gamma_p.

    :ivar float value: Best quotient over all starts.
    :ivar numpy.ndarray field: Its maximizer, nonnegative, with
        ``|u|_D = 1``.
    :ivar list values: Quotient reached by each start.
    """

    lower_bound = True

    def __init__(self, value, field, values):
        self.value = value
        self.field = field
        self.values = values

    def to_dict(self):
        return OrderedDict([
            ('value', self.value),
            ('values', list(self.values)),
            ('lower_bound', self.lower_bound),
        ])


def gamma_p(grid, f, g, p, omega=None, seed=None, starts=10):
    """Estimate ``sup integral_Omega g |u|^p / (integral |grad u|^2)^(p/2)``
    over ``H0^1(Omega)`` fields with ``integral f u^2 >= 0``.

    Projected ascent on the unit Dirichlet sphere, from ``starts`` seeded
    nonnegative fields; the constraint on f enters as a quadratic penalty.

    :raises ConditionError: when no start reaches a positive quotient.
    :returns: :class:`GammaEstimate`
    """
    seed = settings.default_seed if seed is None else seed
    mask = np.ones(grid.size, dtype=bool) if omega is None else \
        np.asarray(omega, dtype=bool)
    K = sparse.csc_matrix(sparse.csr_matrix(grid.stiffness)[mask][:, mask])
    lu = splu(K)
    weights = grid.weights[mask]
    fw = weights * grid.check(f)[mask]
    gw = weights * grid.check(g)[mask]
    penalty = 1e3 * float(np.max(np.abs(gw))) / max(
        float(np.max(np.abs(fw))), 1e-300)

    def objective(u):
        value = float(np.dot(gw, power(u, p)))
        mass = float(np.dot(fw, u * u))
        if mass < 0:
            value -= penalty * mass ** 2
        return value

    def ascent(u):
        e = p * gw * power(u, p - 1.0) * np.sign(u)
        mass = float(np.dot(fw, u * u))
        if mass < 0:
            e -= 4.0 * penalty * mass * fw * u
        return e

    def normalize(u):
        return u / np.sqrt(float(np.dot(u, K.dot(u))))

    values = []
    best = None
    for index in range(starts):
        u = normalize(smooth_field(grid, seed, 'gamma_p', index)[mask])
        value = objective(u)
        step = None
        for _ in range(settings.iteration_caps['descent']):
            e = ascent(u)
            z = lu.solve(e)
            t = z - float(np.dot(u, e)) * u
            size = np.sqrt(max(float(np.dot(t, K.dot(t))), 0.0))
            if size <= 1e-12 * max(abs(value), 1e-300):
                break
            if step is None:
                step = 0.1 / size
            candidate = normalize(u + step * t)
            trial = objective(candidate)
            if trial > value:
                gain = trial - value
                u, value = candidate, trial
                step *= 1.5
                if gain <= 1e-14 * abs(value):
                    break
            else:
                step *= 0.5
                if step * size < 1e-14:
                    break
        u = np.abs(u)
        value = objective(u)
        values.append(value)
        if best is None or value > best[0]:
            best = (value, u)

    if not best[0] > 0:
        raise ConditionError(
            'gamma_p: no field with integral g |u|^p > 0 on Omega (D2)')
    estimate = GammaEstimate(best[0], grid.embed(best[1], mask), values)
    log.info_json('gamma_p', estimate.to_dict())
    return estimate


# Formula helpers.

def a0(p, Gamma):
    """``2(p-2)(4-p)^((4-p)/(p-2)) (Gamma/p)^(2/(p-2))``."""
    return 2.0 * (p - 2.0) * (4.0 - p) ** ((4.0 - p) / (p - 2.0)) * \
        (Gamma / p) ** (2.0 / (p - 2.0))


def lambda_a_plus(a, p, G, lambda1):
    """Left end of the two-solution window when ``integral g phi1^p > 0``.

    :raises ConditionError: for ``G <= 0``.
    """
    if not G > 0:
        raise ConditionError(
            'lambda_a_plus needs integral_Omega g phi1^p > 0 (got {})'.format(
                G))
    return lambda1 - (4.0 - p) * (G / p) ** (2.0 / (4.0 - p)) * \
        (2.0 * (p - 2.0) / (a * lambda1 ** 2)) ** ((p - 2.0) / (4.0 - p))


def t_a_subquartic(a, p, G, lambda1):
    """Amplitude with ``J(t phi1) = t^2/2 (lambda_a_plus - lambda)``."""
    return (2.0 * (p - 2.0) * G / (a * p * lambda1 ** 2)) ** \
        (1.0 / (4.0 - p))


def t_a_gamma(a, p, Gamma, dirichlet):
    """Amplitude along a Gamma_p maximizer with ``|phi|_D^2 = dirichlet``."""
    return ((2.0 * p - 4.0) * Gamma / (a * p)) ** (1.0 / (4.0 - p)) / \
        np.sqrt(dirichlet)


def rho_lambda(lam, lambda1, p, S, g_sup, measure, exponent):
    """Sphere radius below lambda1; ``exponent`` is 2* (6 for N = 3)."""
    if not lam < lambda1:
        return None
    ratio = (lambda1 - lam) / (lambda1 + lam)
    return (0.25 * ratio * p * S ** p /
            (g_sup * measure ** ((exponent - p) / exponent))) ** \
        (1.0 / (p - 2.0))


def Lambda0(lambda1, lambda2):
    return (lambda2 - lambda1) / (2.0 * (lambda2 + lambda1))


def theta(lam, eigenvalue):
    return 0.5 * (1.0 - lam / eigenvalue)


def rho_a_superquartic(a, p, S, g_sup, measure, Lambda_0):
    first = (a * p * S ** p /
             (128.0 * g_sup * measure ** ((6.0 - p) / 6.0))) ** \
        (1.0 / (p - 4.0))
    second = np.sqrt(32.0 * Lambda_0 / (137.0 * a))
    return min(first, second)


def delta_a_mu(lambda1_mu, a, rho_a):
    return lambda1_mu * a * rho_a ** 2 / 128.0


def delta_a_from_radius(lambda1, a, rho_a):
    """``lambda1 a rho_a^2 / 512``: half of delta_{a,mu} at the limit."""
    return lambda1 * a * rho_a ** 2 / 512.0


def C1(lambda1, p, S, g_sup, measure):
    return lambda1 / 4.0 * (1.0 / 128.0) ** ((p - 2.0) / (p - 4.0)) * \
        (p * S ** p / (g_sup * measure ** ((6.0 - p) / 6.0))) ** \
        (2.0 / (p - 4.0))


def C2(lambda1, lambda2):
    return lambda1 * (lambda2 - lambda1) / (4384.0 * (lambda2 + lambda1))


def delta_a_min_form(a, p, C_1, C_2):
    return min(a ** ((p - 2.0) / (p - 4.0)) * C_1, C_2)


def rho_bar_a(a, p, Gamma):
    return ((p - 2.0) * Gamma / (a * p)) ** (1.0 / (4.0 - p))


def rho_hat_a(a, p, G, lambda1):
    return ((p - 2.0) * G / (a * p * lambda1 ** (p / 2.0))) ** \
        (1.0 / (4.0 - p))


def B_constant(p, S, G, g_sup, measure, exponent, lambda1):
    return (S ** p * abs(G) /
            (2.0 ** p * g_sup * (p - 1.0) *
             measure ** ((exponent - p) / exponent) *
             lambda1 ** (p / 2.0))) ** ((p - 1.0) / p)


def rho0(p, S, G, g_sup, measure, exponent, lambda1, Lambda_0, B):
    inner = abs(G) / (4.0 * p * lambda1 ** (p / 2.0)) + \
        2.0 ** (p - 2.0) * g_sup * (1.0 + p * B ** p) * \
        measure ** ((exponent - p) / exponent) / (p * B ** p * S ** p)
    return Lambda_0 ** (1.0 / (p - 2.0)) * inner ** (-1.0 / (p - 2.0))


def delta_bar_a_mu(G, lambda1_mu, p, lambda1, rho_bar):
    return abs(G) * lambda1_mu / (2.0 ** ((p + 2.0) / 2.0) * p *
                                  lambda1 ** (p / 2.0)) * rho_bar ** (p - 2.0)


def _delta_bar_factor(G, p, lambda1):
    return abs(G) / (2.0 ** ((p + 6.0) / 2.0) * p *
                     lambda1 ** ((p - 2.0) / 2.0))


def delta_bar_a(G, p, lambda1, rho_bar):
    return _delta_bar_factor(G, p, lambda1) * rho_bar ** (p - 2.0)


def C3(G, p, lambda1, Gamma):
    return _delta_bar_factor(G, p, lambda1) * \
        ((p - 2.0) * Gamma / p) ** ((p - 2.0) / (4.0 - p))


def C4(G, p, lambda1, rho_0):
    return _delta_bar_factor(G, p, lambda1) * rho_0 ** (p - 2.0)


def delta_bar_a_min_form(a, p, C_3, C_4):
    return min(a ** (-(p - 2.0) / (4.0 - p)) * C_3, C_4)


def d0_bound(p, lam, a, S, f_norm, D0):
    """Norm bound on Palais-Smale sequences below the level D0 (p > 4)."""
    if D0 is None or not p > 4:
        return None
    rest = lam ** 2 * (p - 2.0) ** 2 * f_norm ** 2 / \
        (4.0 * (p - 4.0) * a * S ** 4)
    return np.sqrt(2.0 / (p - 2.0) * (D0 * p + 1.0 + rest))


# Assembled thresholds.

class Spectrum(object):

    """The four eigenvalues the thresholds need."""

    def __init__(self, lambda1, lambda2, lambda1_mu, lambda2_mu):
        self.lambda1 = lambda1
        self.lambda2 = lambda2
        self.lambda1_mu = lambda1_mu
        self.lambda2_mu = lambda2_mu


def thresholds_superquartic(spec, eigs, norms):
    """Mountain-pass radii and windows for N = 3, 4 < p < 6.

    :param Spectrum eigs:
    :param ProblemNorms norms:
    :raises ProblemError: outside N = 3, 4 < p < 6.
    :returns: OrderedDict
    """
    p, a, lam = spec.p, spec.a, spec.lam
    if spec.N != 3 or not 4.0 < p < 6.0:
        raise ProblemError(
            'thresholds_superquartic needs N=3 and 4 < p < 6 (got N={}, '
            'p={})'.format(spec.N, p))
    S = sobolev_constant(3)
    values = OrderedDict()
    values['rho_lambda'] = rho_lambda(lam, eigs.lambda1, p, S, norms.g_sup,
                                      norms.measure, 6.0)
    values['Lambda0'] = Lambda0(eigs.lambda1, eigs.lambda2)
    values['rho_a'] = rho_a_superquartic(a, p, S, norms.g_sup, norms.measure,
                                         values['Lambda0'])
    values['delta_a_mu'] = delta_a_mu(eigs.lambda1_mu, a, values['rho_a'])
    values['delta_a'] = delta_a_from_radius(eigs.lambda1, a, values['rho_a'])
    values['C1'] = C1(eigs.lambda1, p, S, norms.g_sup, norms.measure)
    values['C2'] = C2(eigs.lambda1, eigs.lambda2)
    values['theta1_mu'] = theta(lam, eigs.lambda1_mu)
    values['theta2_mu'] = theta(lam, eigs.lambda2_mu)
    if lam < eigs.lambda1:
        values['rho_a_lambda'] = values['rho_lambda']
    else:
        values['rho_a_lambda'] = values['rho_a']
    return values


def thresholds_subquartic(spec, eigs, Gamma, G, norms):
    """Radii and windows for 2 < p < min(4, 2*).

    :param float Gamma: Gamma_p (estimate).
    :param float G: ``integral_Omega g phi1^p``.
    :raises ProblemError: outside the subquartic range.
    :returns: OrderedDict
    """
    p, a, lam, N = spec.p, spec.a, spec.lam, spec.N
    exponent = critical_exponent(N)
    if not 2.0 < p < min(4.0, exponent):
        raise ProblemError(
            'thresholds_subquartic needs 2 < p < min(4, 2*) (got p={})'.format(
                p))
    S = sobolev_constant(N)
    values = OrderedDict()
    values['rho_bar_lambda'] = rho_lambda(lam, eigs.lambda1, p, S,
                                          norms.g_sup, norms.measure, exponent)
    values['rho_bar_a'] = rho_bar_a(a, p, Gamma)
    values['a0_p'] = a0(p, Gamma)
    values['Lambda0'] = Lambda0(eigs.lambda1, eigs.lambda2)
    values['theta1_mu'] = theta(lam, eigs.lambda1_mu)
    values['theta2_mu'] = theta(lam, eigs.lambda2_mu)
    for key in ('B', 'rho0', 'delta_bar_a_mu', 'delta_bar_a', 'C3', 'C4',
                'rho_hat_a', 'rho_hat_a_lambda', 'lambda_a_plus', 't_a',
                'rho_bar_a_lambda'):
        values[key] = None

    if G < 0:
        values['B'] = B_constant(p, S, G, norms.g_sup, norms.measure,
                                 exponent, eigs.lambda1)
        values['rho0'] = rho0(p, S, G, norms.g_sup, norms.measure, exponent,
                              eigs.lambda1, values['Lambda0'], values['B'])
        outer = min(values['rho0'], values['rho_bar_a'])
        values['delta_bar_a_mu'] = delta_bar_a_mu(
            G, eigs.lambda1_mu, p, eigs.lambda1, outer)
        values['delta_bar_a'] = delta_bar_a(G, p, eigs.lambda1, outer)
        values['C3'] = C3(G, p, eigs.lambda1, Gamma)
        values['C4'] = C4(G, p, eigs.lambda1, values['rho0'])
    elif G > 0:
        values['rho_hat_a'] = rho_hat_a(a, p, G, eigs.lambda1)
        values['lambda_a_plus'] = lambda_a_plus(a, p, G, eigs.lambda1)
        values['t_a'] = t_a_subquartic(a, p, G, eigs.lambda1)
        if values['lambda_a_plus'] < 0:
            log.warn('lambda_a_plus={} is negative: a={} lies below '
                     'a0(p)={}'.format(values['lambda_a_plus'], a,
                                       values['a0_p']))
        if values['rho_bar_lambda'] is not None:
            values['rho_hat_a_lambda'] = min(values['rho_bar_lambda'],
                                             values['rho_hat_a'])

    if lam < eigs.lambda1:
        values['rho_bar_a_lambda'] = min(values['rho_bar_lambda'],
                                         values['rho_bar_a'])
    elif values['rho0'] is not None:
        values['rho_bar_a_lambda'] = min(values['rho0'], values['rho_bar_a'])
    return values


def coercivity_constants(spec, norms):
    """Well threshold mu0, the coercivity threshold (mu0_N3 for N = 3,
    mu1 for N >= 4) and C_{N,a,lambda} of ``J >= |u|_mu^2/4 - C``.

    :raises ConditionError: when N = 3 and c_star or R_star is missing.
    :returns: OrderedDict; subquartic entries are None for p >= 4.
    """
    N, p, a, lam, c0 = spec.N, spec.p, spec.a, spec.lam, spec.c0
    S = sobolev_constant(N)
    exponent = critical_exponent(N)
    g_sup, m, f_norm = norms.g_sup, norms.measure, norms.f_norm_N2
    values = OrderedDict()
    values['mu0'] = S ** 2 / (c0 * m ** ((exponent - 2.0) / exponent))
    values['C_bar_0'] = hardy_constant(N)
    values['mu0_N3'] = None
    values['mu1'] = None
    values['C_N_a_lambda'] = None
    if not p < min(4.0, exponent):
        return values

    f_part = 3.0 * lam ** 2 * f_norm ** 2 / (4.0 * a * S ** 4)
    if N == 3:
        if spec.c_star is None or spec.R_star is None:
            raise ConditionError(
                'coercivity_constants for N=3 needs c_star and R_star (H3)')
        C0 = values['C_bar_0']
        values['mu0_N3'] = 4.0 * (4.0 - p) * \
            (spec.c_star * g_sup / p ** 2) ** (1.0 / (4.0 - p)) * \
            (6.0 * np.sqrt(2.0) * (p - 2.0) * C0 / (a * S ** 3)) ** \
            ((p - 2.0) / (4.0 - p))
        ball = unit_sphere_area(3) / 3.0 * spec.R_star ** 3
        values['C_N_a_lambda'] = (4.0 - p) / p * \
            2.0 ** ((p - 2.0) / (4.0 - p)) * \
            ball ** ((12.0 - 2.0 * p) / (12.0 - 3.0 * p)) * \
            (g_sup / S ** p) ** (4.0 / (4.0 - p)) * \
            (3.0 / a) ** (p / (4.0 - p)) + f_part
    elif N == 4:
        values['mu1'] = 4.0 * (4.0 - p) / c0 * \
            (g_sup / p) ** (2.0 / (4.0 - p)) * \
            (6.0 * (p - 2.0) / (a * S ** 4)) ** ((p - 2.0) / (4.0 - p))
        values['C_N_a_lambda'] = (4.0 - p) * m / p * \
            (g_sup / S ** p) ** (4.0 / (4.0 - p)) * \
            (3.0 / a) ** (p / (4.0 - p)) + f_part
    else:
        values['mu1'] = 8.0 * (exponent - p) * g_sup / \
            ((exponent - 2.0) * p * c0)
        values['C_N_a_lambda'] = (4.0 - p) / (4.0 * p) * \
            (2.0 ** ((exponent - p) / (exponent - 2.0)) *
             m ** ((exponent - p) / exponent) * g_sup / S ** p) ** \
            (4.0 / (4.0 - p)) * (3.0 / a) ** (p / (4.0 - p)) + \
            (4.0 - exponent) / 4.0 * \
            ((p - 2.0) * g_sup / ((exponent - 2.0) * p * S ** exponent)) ** \
            (4.0 / (4.0 - exponent)) * \
            (3.0 * exponent / a) ** (exponent / (4.0 - exponent)) + f_part
    return values


def coercivity_threshold(values):
    """The mu above which ``J >= |u|_mu^2/4 - C`` holds (N = 3 or N >= 4)."""
    return values['mu0_N3'] if values['mu0_N3'] is not None else \
        values['mu1']


# Regimes.

def _same(x, y):
    return abs(x - y) <= 1e-9 * max(abs(x), abs(y), 1.0)


def identify_regime(spec, lambda1, G=None, a0_p=None, delta_a=None,
                    delta_bar_a=None, lambda_a_plus=None):
    """Name the existence statement covering ``spec`` and its count.

    :returns: :class:`Regime`
    """
    p, a, lam, N = spec.p, spec.a, spec.lam, spec.N
    none = Regime('none', 0)
    if not lam > 0:
        return none

    if N == 3 and 4.0 < p < 6.0:
        if lam < lambda1 or _same(lam, lambda1):
            return Regime('thm1-i', 1, ('mountain-pass',), ('+',),
                          'rho_a_lambda')
        if delta_a is not None and lam < lambda1 + delta_a:
            return Regime('thm1-ii', 2, ('mountain-pass', 'ball-min'),
                          ('+', '-'), 'rho_a_lambda')
        return none

    if not p < min(4.0, critical_exponent(N)) or a0_p is None:
        return none

    if a < a0_p:
        if lam < lambda1 and not _same(lam, lambda1):
            return Regime('thm2-i', 2, ('mountain-pass', 'exterior-min'),
                          ('+', '-'), 'rho_bar_a_lambda')
        if G is not None and G < 0:
            if _same(lam, lambda1):
                return Regime('thm2-ii-1', 2,
                              ('mountain-pass', 'exterior-min'), ('+', '-'),
                              'rho_bar_a_lambda')
            if delta_bar_a is not None and lam < lambda1 + delta_bar_a:
                return Regime('thm2-ii-2', 3,
                              ('mountain-pass', 'exterior-min', 'ball-min'),
                              ('+', '-', '-'), 'rho_bar_a_lambda')
        return none

    if G is not None and G > 0 and lambda_a_plus is not None and \
            lambda_a_plus < lam < lambda1:
        return Regime('thm3', 2, ('mountain-pass', 'exterior-min'),
                      ('+', '-'), 'rho_hat_a_lambda')
    return none


# Report.

def build_report(grid, spec, seed=None):
    """Compute eigenvalues, norms, Gamma_p and every applicable constant.

    D0 and d0_bound need an e0 and are filled in by the caller through
    :meth:`ConstantsReport.update`.

    :returns: :class:`ConstantsReport`
    """
    # Local import: eigen pulls in the problem machinery.
    from kirchwell.eigen import mu_pairs, omega_pairs

    first, second = omega_pairs(grid, spec)
    first_mu, second_mu = mu_pairs(grid, spec)
    eigs = Spectrum(first.value, second.value, first_mu.value,
                    second_mu.value)
    norms = problem_norms(grid, spec)
    G = g_phi1_integral(grid, spec, first.field)

    report = ConstantsReport(
        S=sobolev_constant(spec.N), measure_V_lt_c0=norms.measure,
        g_sup=norms.g_sup, f_norm_N2=norms.f_norm_N2, g_phi1_p=G,
        lambda1=eigs.lambda1, lambda2=eigs.lambda2,
        lambda1_mu=eigs.lambda1_mu, lambda2_mu=eigs.lambda2_mu)

    coercive = coercivity_constants(spec, norms)
    report.update(**coercive)

    exponent = critical_exponent(spec.N)
    if spec.N == 3 and 4.0 < spec.p < 6.0:
        report.update(**thresholds_superquartic(spec, eigs, norms))
        report.regime = identify_regime(spec, eigs.lambda1, G,
                                        delta_a=report.delta_a)
    elif spec.p < min(4.0, exponent):
        data = spec.nodal(grid)
        estimate = gamma_p(grid, data.f, data.g, spec.p, data.omega,
                           seed=seed)
        report.update(Gamma_p=estimate.value)
        report.update(**thresholds_subquartic(spec, eigs, estimate.value, G,
                                              norms))
        report.regime = identify_regime(
            spec, eigs.lambda1, G, a0_p=report.a0_p,
            delta_bar_a=report.delta_bar_a,
            lambda_a_plus=report.lambda_a_plus)
    else:
        report.regime = Regime('none', 0)

    log.info_json('build_report', report.to_dict())
    return report
