"""
The base module provides :class:`ProblemSpec`, the description of one
instance of the Kirchhoff problem: the parameters (N, a, p, lambda, mu), the
well threshold c0, the optional (H3) constants and the sampler families for
V, f, g and the indicator of Omega. The canonical test problems
(:class:`~kirchwell.problem.cube.CubeP5`, the ball problems in
:mod:`kirchwell.problem.ball`) are sub-classes that fill in V and Omega.

Samplers take an array of points (one row per node, radial grids pass the
radius as a single column) and return one value per row. Any sampler may be
replaced by a callable or by tabulated nodal values through ``samplers=``.
"""
from collections import OrderedDict

import numpy as np
from tabulate import tabulate

from kirchwell import log
from kirchwell.errors import ConditionError, ProblemError
from kirchwell.grid import build_grid


def critical_exponent(N):
    """2* = 2N/(N-2); infinite for N <= 2."""
    if N <= 2:
        return np.inf
    return 2.0 * N / (N - 2.0)


class NodalData(object):

    """Samplers evaluated on one grid. Arrays are read-only."""

    def __init__(self, V, f, g, g_base, g_shape, omega):
        self.V = V
        self.f = f
        self.g = g
        self.g_base = g_base
        self.g_shape = g_shape
        self.omega = omega
        for array in (V, f, g, g_base, g_shape, omega):
            array.setflags(write=False)


class ProblemSpec(object):

    """One instance of the indefinite Kirchhoff problem (b = 1).

    :param int N: Ambient dimension.
    :param float a: Nonlocal coefficient, a > 0.
    :param float p: Exponent, 2 < p < 2N/(N-2).
    :param float lam: Weight of the linear term (lambda).
    :param float mu: Well depth, mu >= 0.
    :param float c0: Well threshold, c0 > 0.
    :param GridSpec grid_spec: Default grid.
    :param float kappa: Shift in g = base(x) (kappa - s(x)).
    :param float c_star: (H3) constant, optional.
    :param float R_star: (H3) radius, optional.
    :param bool sign_changing_f: Use f = exp(-|x|^2)(1 - 2|x|^2).
    :param dict samplers: Replacements for ``V``, ``f``, ``g``, ``omega``:
        callables on points or arrays of nodal values.
    """

    __name__ = 'ProblemSpec'

    #: Canonical names served by this class.
    names = ()

    def __init__(self, N, a, p, lam, mu, c0, grid_spec, kappa=1.0,
                 c_star=None, R_star=None, sign_changing_f=False,
                 samplers=None, name=None):
        self.N = int(N)
        self.a = float(a)
        self.p = float(p)
        self.lam = float(lam)
        self.mu = float(mu)
        self.c0 = float(c0)
        self.grid_spec = grid_spec
        self.kappa = float(kappa)
        self.c_star = None if c_star is None else float(c_star)
        self.R_star = None if R_star is None else float(R_star)
        self.sign_changing_f = bool(sign_changing_f)
        self.samplers = dict(samplers or {})
        self.name = name or (self.names[0] if self.names else 'custom')
        self._nodal = {}
        self._grid = None

    # Sampler families shared by the canonical problems.

    def V(self, points):
        raise NotImplementedError('{} has no potential'.format(self.name))

    def omega(self, points):
        raise NotImplementedError('{} has no Omega'.format(self.name))

    def f(self, points):
        r2 = np.sum(points ** 2, axis=1)
        if self.sign_changing_f:
            return np.exp(-r2) * (1.0 - 2.0 * r2)
        return np.exp(-r2)

    def g_base(self, points):
        return np.exp(-0.25 * np.sum(points ** 2, axis=1))

    def g_shape(self, points):
        return np.sum(points ** 2, axis=1)

    def g(self, points):
        return self.g_base(points) * (self.kappa - self.g_shape(points))

    # Bookkeeping.

    @property
    def exponent_cap(self):
        return critical_exponent(self.N)

    def copy(self, **overrides):
        """Return a new spec of the same class with some fields replaced."""
        values = self.to_kwargs()
        values.update(overrides)
        spec = self.__class__(**values)
        if spec.grid_spec == self.grid_spec:
            spec._grid = self._grid
        return spec

    def to_kwargs(self):
        return {
            'N': self.N, 'a': self.a, 'p': self.p, 'lam': self.lam,
            'mu': self.mu, 'c0': self.c0, 'grid_spec': self.grid_spec,
            'kappa': self.kappa, 'c_star': self.c_star,
            'R_star': self.R_star, 'sign_changing_f': self.sign_changing_f,
            'samplers': self.samplers, 'name': self.name,
        }

    def to_config(self):
        """Key-value view matching the problem config file format."""
        config = OrderedDict()
        config['problem.name'] = self.name
        config['dim'] = self.grid_spec.dim
        config['mode'] = self.grid_spec.mode
        config['L'] = self.grid_spec.half_length
        config['n'] = self.grid_spec.nodes
        config['a'] = self.a
        config['p'] = self.p
        config['lambda'] = self.lam
        config['mu'] = self.mu
        config['g.kappa'] = self.kappa
        config['c0'] = self.c0
        config['c_star'] = self.c_star
        config['R_star'] = self.R_star
        return config

    def validate(self):
        """Check the parameter invariants.

        :raises ProblemError:
        :returns: self
        """
        if not self.a > 0:
            raise ProblemError('a must be positive (got {})'.format(self.a))
        if not 2.0 < self.p < self.exponent_cap:
            raise ProblemError(
                'p must lie in (2, {}) for N={} (got {})'.format(
                    self.exponent_cap, self.N, self.p))
        if not self.c0 > 0:
            raise ProblemError('c0 must be positive (got {})'.format(self.c0))
        if self.mu < 0:
            raise ProblemError('mu must be >= 0 (got {})'.format(self.mu))
        if self.grid_spec.dim != self.N:
            raise ProblemError(
                'grid dimension {} does not match N={}'.format(
                    self.grid_spec.dim, self.N))
        self.grid_spec.validate()
        return self

    def build_grid(self):
        """Build (once) the default grid of this spec."""
        if self._grid is None:
            self._grid = build_grid(self.grid_spec)
        return self._grid

    def nodal(self, grid):
        """Evaluate every sampler on ``grid`` (cached per grid).

        :returns: :class:`NodalData`
        """
        if grid.id in self._nodal:
            return self._nodal[grid.id]

        points = grid.points
        values = {}
        for key in ('V', 'f', 'g_base', 'g_shape', 'omega'):
            values[key] = self._sample(key, points, grid)
        if 'g' in self.samplers:
            values['g'] = self._sample('g', points, grid)
        else:
            values['g'] = values['g_base'] * (self.kappa - values['g_shape'])

        data = NodalData(
            np.array(values['V'], dtype=float),
            np.array(values['f'], dtype=float),
            np.array(values['g'], dtype=float),
            np.array(values['g_base'], dtype=float),
            np.array(values['g_shape'], dtype=float),
            np.array(values['omega'], dtype=bool))
        self._nodal[grid.id] = data
        return data

    def _sample(self, key, points, grid):
        source = self.samplers.get(key)
        if source is None:
            return getattr(self, key)(points)
        if callable(source):
            return source(points)
        return grid.check(source)

    def __repr__(self):
        return '{}(name={}, a={}, p={}, lambda={}, mu={})'.format(
            self.__name__, self.name, self.a, self.p, self.lam, self.mu)

    @classmethod
    def get_class_by_name(cls, name, classes):
        """Static method to get a problem class by canonical name."""
        for i in classes:
            if name in i.names:
                return i

        return None

    @classmethod
    def get_valid_names(cls):
        """Static method to access the canonical names of this class.

        :returns: tuple(str)
        """
        return cls.names


def get_all_subclasses(cls=None):
    """Module method to get all subclasses of ProblemSpec.
    """
    subclasses = set()

    this_class = ProblemSpec
    if cls is not None:
        this_class = cls

    subclasses.add(this_class)

    this_class_subclasses = this_class.__subclasses__()
    for child_class in this_class_subclasses:
        subclasses.update(get_all_subclasses(child_class))

    return subclasses


class ConditionCheck(object):

    """Outcome of one nodewise hypothesis check."""

    def __init__(self, passed, value=None, witness=None, point=None):
        self.passed = bool(passed)
        self.value = value
        self.witness = witness
        self.point = point

    def to_dict(self):
        return {
            'passed': self.passed,
            'value': None if self.value is None else float(self.value),
            'witness': None if self.witness is None else int(self.witness),
            'point': None if self.point is None else [
                float(x) for x in self.point],
        }


class ValidationReport(object):

    """Per-condition pass/fail with witnesses, the measure of {V < c0} and the
    largest (H3) violation."""

    def __init__(self, problem_name, grid_id):
        self.problem_name = problem_name
        self.grid_id = grid_id
        self.conditions = OrderedDict()
        self.measure_V_lt_c0 = 0.0
        self.h3_max_violation = None

    @property
    def passed(self):
        return all(check.passed for check in self.conditions.values())

    def failed(self):
        return [name for name, check in self.conditions.items()
                if not check.passed]

    def raise_for_failure(self):
        if not self.passed:
            raise ConditionError('{} violates {}'.format(
                self.problem_name, ', '.join(self.failed())))

    def to_dict(self):
        return {
            'problem': self.problem_name,
            'grid': self.grid_id,
            'passed': self.passed,
            'measure_V_lt_c0': self.measure_V_lt_c0,
            'h3_max_violation': self.h3_max_violation,
            'conditions': OrderedDict(
                (name, check.to_dict())
                for name, check in self.conditions.items()),
        }

    def write(self):
        rows = []
        for name, check in self.conditions.items():
            rows.append([name, 'pass' if check.passed else 'FAIL',
                         check.value, check.witness])
        print(tabulate(rows, headers=['Condition', 'Status', 'Value',
                                      'Witness node']))


def _witness(check_values, mask, largest=True):
    """Index (in the full grid) of the extreme value over ``mask``."""
    indices = np.flatnonzero(mask)
    if indices.size == 0:
        return None
    position = np.argmax(check_values[indices]) if largest else np.argmin(
        check_values[indices])
    return int(indices[position])


def validate_conditions(spec, grid, require_h3=None):
    """Nodewise checks of (V1), (V2), (D1), (D2) and, for N = 3 and p < 4
    (or when ``require_h3`` is True), (H3).

    :raises ConditionError: when (H3) is requested but c_star or R_star is
        missing.
    :returns: :class:`ValidationReport`
    """
    data = spec.nodal(grid)
    report = ValidationReport(spec.name, grid.id)
    everywhere = np.ones(grid.size, dtype=bool)

    node = _witness(data.V, everywhere, largest=False)
    report.conditions['V1'] = ConditionCheck(
        data.V[node] >= 0, data.V[node], node, grid.points[node])

    below = data.V < spec.c0
    report.measure_V_lt_c0 = grid.measure(below)
    report.conditions['V1-measure'] = ConditionCheck(
        report.measure_V_lt_c0 > 0, report.measure_V_lt_c0)

    node = _witness(np.abs(data.V), data.omega)
    if node is None:
        report.conditions['V2'] = ConditionCheck(False, None)
    else:
        report.conditions['V2'] = ConditionCheck(
            data.V[node] == 0.0, data.V[node], node, grid.points[node])

    for key, values in (('D1', data.f), ('D2', data.g)):
        node = _witness(values, data.omega)
        if node is None:
            report.conditions[key] = ConditionCheck(False, None)
        else:
            report.conditions[key] = ConditionCheck(
                values[node] > 0, values[node], node, grid.points[node])

    if require_h3 is None:
        require_h3 = spec.N == 3 and spec.p < 4
    if require_h3:
        if spec.c_star is None or spec.R_star is None:
            raise ConditionError(
                '(H3) check on {} needs c_star and R_star'.format(spec.name))
        outside = grid.radius > spec.R_star
        excess = (grid.radius ** (spec.p - 2.0) * data.g -
                  spec.c_star * data.V ** (4.0 - spec.p))
        node = _witness(excess, outside)
        if node is None:
            report.h3_max_violation = None
            report.conditions['H3'] = ConditionCheck(True, None)
        else:
            report.h3_max_violation = float(excess[node])
            report.conditions['H3'] = ConditionCheck(
                excess[node] <= 0, excess[node], node, grid.points[node])

    log.info_json('validate_conditions', report.to_dict())
    return report


def tune_g_sign(spec, grid, phi1, target=None, margin=0.5):
    """Threshold of kappa at which integral_Omega g phi1^p changes sign.

    For g = base (kappa - s) the integral is affine in kappa with slope
    integral base phi1^p, so kappa* = integral base s phi1^p / integral
    base phi1^p. With ``target`` set to ``negative`` or ``positive`` the
    function instead returns a kappa on the requested side,
    kappa* (1 -/+ margin), after checking that g+ stays nonzero on Omega.

    :raises ConditionError: when base is not positive on Omega, or when the
        chosen kappa would make g <= 0 on Omega.
    """
    data = spec.nodal(grid)
    values = grid.check(phi1)
    weights = grid.weights * data.omega * np.abs(values) ** spec.p
    denominator = float(np.dot(weights, data.g_base))
    if not denominator > 0:
        raise ConditionError(
            'tune_g_sign: integral of base phi1^p is {} (base must be '
            'positive on Omega)'.format(denominator))
    threshold = float(np.dot(weights, data.g_base * data.g_shape)) / denominator
    if target is None:
        return threshold

    if target == 'negative':
        kappa = threshold - margin * abs(threshold)
    elif target == 'positive':
        kappa = threshold + margin * max(abs(threshold), 1.0)
    else:
        raise ProblemError('target must be negative or positive')

    g = data.g_base * (kappa - data.g_shape)
    if not np.max(g[data.omega]) > 0:
        raise ConditionError(
            'tune_g_sign: kappa={} leaves g <= 0 on Omega (D2)'.format(kappa))
    sign = np.sign(np.dot(weights, g))
    if sign != (-1.0 if target == 'negative' else 1.0):
        raise ConditionError(
            'tune_g_sign: no kappa on the {} side of {} keeps (D2)'.format(
                target, threshold))
    return kappa
