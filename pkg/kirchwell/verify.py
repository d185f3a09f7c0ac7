"""
Verification suites. Each suite runs a block of checks (analytic oracles,
identities and census counts) and returns a
:class:`~kirchwell.result.Result` with one row per criterion: its name,
whether it passed, the measured value and the tolerance.
"""
import json

import numpy as np

from kirchwell import log, settings
from kirchwell.config import load_verify_config
from kirchwell.constants import (C1, C2, C3, C4, a0, build_report,
                                 delta_a_from_radius, delta_a_min_form,
                                 delta_bar_a, delta_bar_a_min_form,
                                 gamma_p, lambda_a_plus, rho_a_superquartic,
                                 rho_bar_a, sobolev_constant, sobolev_oracle,
                                 coercivity_constants, coercivity_threshold,
                                 problem_norms)
from kirchwell.eigen import (lambda1_omega, lambda2_omega, mu_convergence_scan,
                             mu_pairs, omega_pairs)
from kirchwell.errors import ConditionError, KirchwellError, ProblemError
from kirchwell.functional import Operators
from kirchwell.grid import GridSpec, build_grid, laplacian_apply
from kirchwell.problem import canonical_names, canonical_problem
from kirchwell.result import Result
from kirchwell.seeding import generator, smooth_field

#: Suites in the order ``all`` runs them.
SUITES = ('grid', 'eigen', 'functional', 'constants', 'thm1', 'thm2', 'thm3',
          'branch')


def verify_suite(name, seed=None, options=None):
    """Run one suite, or every suite for ``all``.

    :raises ProblemError: for an unknown suite name.
    :returns: :class:`~kirchwell.result.Result`
    """
    options = options or load_verify_config()
    seed = options['seed'] if seed is None else seed
    if name == 'all':
        result = Result('all')
        for suite in SUITES:
            result.extend(verify_suite(suite, seed, options))
        return result
    if name not in SUITES:
        raise ProblemError('unknown suite {!r}; choose from {}, all'.format(
            name, ', '.join(SUITES)))
    result = Result(name)
    try:
        globals()['_suite_{}'.format(name)](result, seed, options)
    except KirchwellError as error:
        result.append(('{}: {}'.format(name, type(error).__name__), False,
                       str(error), 'no error'))
    log.info_json('verify_suite', result.to_dict())
    return result


def _relative(value, expected):
    return abs(value - expected) / abs(expected)


def _require(report, name):
    value = report.values.get(name)
    if value is None:
        raise ConditionError('{} is undefined for this problem'.format(name))
    return value


def _problem(name, options, **overrides):
    overrides.setdefault('mu', options['mu'])
    return canonical_problem(name, **overrides)


def _with_a0(spec, factor, seed):
    grid = spec.build_grid()
    data = spec.nodal(grid)
    estimate = gamma_p(grid, data.f, data.g, spec.p, data.omega, seed=seed)
    return spec.copy(a=factor * a0(spec.p, estimate.value))


def _census_rows(result, label, census, count, signs=None):
    result.append(('{}: positive solutions'.format(label),
                   census.count >= count, census.count,
                   '>= {}'.format(count)))
    residual = max([item.residual for item in census if item.positive] or
                   [0.0])
    result.append(('{}: residual'.format(label),
                   residual <= settings.tolerances['solve'], residual,
                   settings.tolerances['solve']))
    bounded = [item for item in census if 'lower_bound_ok' in item.extras]
    if bounded:
        lowest = min(bounded, key=lambda item: item.energy)
        result.append(('{}: exterior minimum above -1.05 C'.format(label),
                       all(item.extras['lower_bound_ok'] for item in bounded),
                       lowest.energy, lowest.extras['lower_bound']))
    if signs:
        found = census.signs
        enough = all(found.count(sign) >= signs.count(sign)
                     for sign in set(signs))
        result.append(('{}: energy signs'.format(label), enough,
                       ''.join(found), ''.join(signs)))


# Suites.

def _suite_grid(result, seed, options):
    for nodes in (33, 65):
        grid = build_grid(GridSpec(1, 0.5, nodes, 'tensor'))
        x = grid.points[:, 0] + 0.5
        u = np.sin(np.pi * x)
        error = float(np.max(np.abs(laplacian_apply(grid, u) -
                                    np.pi ** 2 * u)))
        result.append(('laplacian 1D n={}'.format(nodes),
                       error <= 0.05 * (32.0 / (nodes - 1)) ** 2, error,
                       'O(h^2)'))

    radial = build_grid(GridSpec(3, 1.0, 201, 'radial'))
    volume = 4.0 * np.pi / 3.0
    total = float(np.sum(radial.weights))
    result.append(('radial weights sum to |B_1|',
                   _relative(total, volume) <= 1e-12, total, volume))
    u = np.cos(0.5 * np.pi * radial.radius)
    # -Delta cos(pi r/2) in R^3
    r = np.maximum(radial.radius, 1e-300)
    exact = (np.pi / 2) ** 2 * u + np.pi / r * np.sin(0.5 * np.pi * r)
    exact[0] = 3.0 * (np.pi / 2) ** 2
    error = float(np.max(np.abs(laplacian_apply(radial, u) - exact)[:-1]))
    result.append(('radial laplacian', error <= 1e-2, error, 1e-2))


def _suite_eigen(result, seed, options):
    line = build_grid(GridSpec(1, 0.5, 1001, 'tensor'))
    ones = np.ones(line.size)
    first = lambda1_omega(line, ones)
    second = lambda2_omega(line, ones, first.field)
    for label, pair, exact in (('lambda1 1D', first, np.pi ** 2),
                               ('lambda2 1D', second, 4 * np.pi ** 2)):
        result.append((label, _relative(pair.value, exact) <= 5e-3,
                       pair.value, exact))

    cube = build_grid(GridSpec(3, 1.0, 33, 'tensor'))
    pair = lambda1_omega(cube, np.ones(cube.size))
    exact = 3 * np.pi ** 2 / 4
    result.append(('lambda1 cube', _relative(pair.value, exact) <= 0.02,
                   pair.value, exact))

    spec = _problem('TP-BALL-P5', options)
    grid = spec.build_grid()
    phi1, phi2 = omega_pairs(grid, spec)
    rows = mu_convergence_scan(spec, [1.0, 10.0, 100.0, options['mu']], grid)
    values = [row['lambda1_mu'] for row in rows]
    distances = [row['eigfield_dist'] for row in rows]
    result.append(('lambda1_mu nondecreasing in mu',
                   all(b >= a for a, b in zip(values, values[1:])),
                   values, 'monotone'))
    result.append(('lambda1_mu below lambda1',
                   max(values) <= phi1.value + 1e-10, max(values),
                   phi1.value))
    gap = rows[-1]['gap1'] / phi1.value
    result.append(('relative gap at mu={}'.format(options['mu']),
                   gap <= options['gap_tolerance'], gap,
                   options['gap_tolerance']))
    result.append(('eigenfield distance decreasing',
                   all(b <= a for a, b in zip(distances, distances[1:])),
                   distances, 'monotone'))
    second_mu = mu_pairs(grid, spec)[1]
    middle = 0.5 * (phi1.value + phi2.value)
    result.append(('lambda2_mu above the midpoint', second_mu.value > middle,
                   second_mu.value, middle))


def _suite_functional(result, seed, options):
    for name in canonical_names():
        if name == 'TP-BALL-P3':
            continue
        spec = _problem(name, options)
        if spec.grid_spec.mode == 'tensor':
            spec = spec.copy(grid_spec=spec.grid_spec.copy(nodes=17))
        grid = spec.build_grid()
        ops = Operators.for_problem(grid, spec)
        worst = 0.0
        for index in range(50):
            u = smooth_field(grid, seed, 'verify_gradient', 2 * index)
            phi = smooth_field(grid, seed, 'verify_gradient', 2 * index + 1,
                               positive=False)
            exact = float(np.dot(ops.weak_gradient(u), phi))
            step = 1e-5
            numeric = (ops.energy(u + step * phi).total -
                       ops.energy(u - step * phi).total) / (2 * step)
            worst = max(worst, abs(numeric - exact) / max(abs(exact), 1e-8))
        result.append(('gradient vs finite differences {}'.format(name),
                       worst <= 1e-5, worst, 1e-5))

    spec = _problem('TP-BALL-P3-NEG', options)
    grid = spec.build_grid()
    values = coercivity_constants(spec, problem_norms(grid, spec))
    spec = spec.copy(mu=2.0 * coercivity_threshold(values))
    values = coercivity_constants(spec, problem_norms(grid, spec))
    bound = values['C_N_a_lambda']
    ops = Operators.for_problem(grid, spec)
    rng = generator(seed, 'verify_coercivity')
    violations = 0
    for index in range(1000):
        u = smooth_field(grid, seed, 'verify_coercivity', index,
                         positive=False)
        u *= 10.0 ** rng.uniform(-2.0, 2.0) / ops.norm_mu(u)
        if ops.energy(u).total < 0.25 * ops.inner_mu(u, u) - 1.05 * bound:
            violations += 1
    result.append(('coercivity at mu={:.6g}'.format(spec.mu),
                   violations == 0, violations, 0))


def _suite_constants(result, seed, options):
    rng = generator(seed, 'verify_constants')
    worst = 0.0
    for _ in range(100):
        a = rng.uniform(0.1, 10.0)
        p = rng.uniform(4.1, 5.9)
        S, g_sup, measure = rng.uniform(1.0, 3.0, size=3)
        lambda1 = rng.uniform(1.0, 20.0)
        lambda2 = lambda1 * rng.uniform(1.1, 5.0)
        Lambda_0 = (lambda2 - lambda1) / (2 * (lambda2 + lambda1))
        rho = rho_a_superquartic(a, p, S, g_sup, measure, Lambda_0)
        block = delta_a_from_radius(lambda1, a, rho)
        closed = delta_a_min_form(a, p, C1(lambda1, p, S, g_sup, measure),
                                  C2(lambda1, lambda2))
        worst = max(worst, _relative(closed, block))
    result.append(('delta_a identity', worst <= 1e-12, worst, 1e-12))

    worst = 0.0
    for _ in range(100):
        a = rng.uniform(0.1, 10.0)
        p = rng.uniform(2.1, 3.9)
        G = -rng.uniform(0.01, 2.0)
        Gamma = rng.uniform(0.01, 2.0)
        lambda1 = rng.uniform(1.0, 20.0)
        rho_0 = rng.uniform(0.01, 2.0)
        block = delta_bar_a(G, p, lambda1,
                            min(rho_0, rho_bar_a(a, p, Gamma)))
        closed = delta_bar_a_min_form(a, p, C3(G, p, lambda1, Gamma),
                                      C4(G, p, lambda1, rho_0))
        worst = max(worst, _relative(closed, block))
    result.append(('delta_bar_a identity', worst <= 1e-12, worst, 1e-12))

    worst = 0.0
    for _ in range(20):
        p = rng.uniform(2.1, 3.9)
        Gamma = rng.uniform(0.01, 2.0)
        lambda1 = rng.uniform(1.0, 20.0)
        G = Gamma * lambda1 ** (p / 2)
        worst = max(worst, abs(lambda_a_plus(a0(p, Gamma), p, G, lambda1)) /
                    lambda1)
    result.append(('lambda_a_plus vanishes at a0', worst <= 1e-10, worst,
                   1e-10))

    values = [lambda_a_plus(a, 3.0, 0.5, 10.0) for a in
              np.linspace(0.5, 50.0, 50)]
    result.append(('lambda_a_plus increasing in a',
                   all(b > a for a, b in zip(values, values[1:])),
                   values[-1] - values[0], '> 0'))

    oracle, _ = sobolev_oracle(3)
    exact = sobolev_constant(3)
    result.append(('Sobolev constant N=3', _relative(oracle, exact) <= 0.01,
                   oracle, exact))

    spec = _problem('TP-BALL-P3-NEG', options)
    grid = spec.build_grid()
    first = json.dumps(build_report(grid, spec, seed).to_dict(),
                       sort_keys=True, default=str)
    again = json.dumps(build_report(grid, spec.copy(), seed).to_dict(),
                       sort_keys=True, default=str)
    result.append(('report determinism', first == again, len(first),
                   'identical'))


def _suite_thm1(result, seed, options):
    # Imported here: the solvers pull in every other module.
    from kirchwell.solvers import check_geometry, multiplicity_census

    spec = _problem('TP-BALL-P5', options)
    grid = spec.build_grid()
    lambda1 = omega_pairs(grid, spec)[0].value
    report = build_report(grid, spec.copy(lam=lambda1), seed)
    lam = lambda1 + 0.5 * report.delta_a
    window = spec.copy(lam=lam)
    radius = build_report(grid, window, seed).rho_a_lambda
    geometry = check_geometry(grid, window, radius, 'rho_a_lambda', seed)
    result.append(('sphere minimum at rho_a_lambda',
                   geometry.sphere_min > 0, geometry.sphere_min, '> 0'))
    result.append(('J(e0) < 0 outside the sphere',
                   geometry.e0_energy < 0 and geometry.e0_norm > radius,
                   geometry.e0_energy, '< 0'))

    census = multiplicity_census(spec, 0.9 * lambda1, grid, seed)
    _census_rows(result, 'lambda=0.9 lambda1', census, 1)
    census = multiplicity_census(spec, lam, grid, seed)
    _census_rows(result, 'lambda=lambda1+delta_a/2', census, 2, '+-')


def _suite_thm2(result, seed, options):
    from kirchwell.solvers import multiplicity_census

    spec = _with_a0(_problem('TP-BALL-P3-NEG', options), 0.5, seed)
    grid = spec.build_grid()
    lambda1 = omega_pairs(grid, spec)[0].value
    census = multiplicity_census(spec, 0.5 * lambda1, grid, seed)
    _census_rows(result, 'lambda=0.5 lambda1', census, 2, '+-')
    census = multiplicity_census(spec, lambda1, grid, seed)
    _census_rows(result, 'lambda=lambda1', census, 2)
    report = build_report(grid, spec.copy(lam=lambda1), seed)
    lam = lambda1 + 0.5 * _require(report, 'delta_bar_a')
    census = multiplicity_census(spec, lam, grid, seed)
    _census_rows(result, 'lambda=lambda1+delta_bar_a/2', census, 3, '+--')


def _suite_thm3(result, seed, options):
    from kirchwell.solvers import find_e0, multiplicity_census

    spec = _with_a0(_problem('TP-BALL-P3-POS', options), 2.0, seed)
    grid = spec.build_grid()
    report = build_report(grid, spec, seed)
    lam = 0.5 * (_require(report, 'lambda_a_plus') + report.lambda1)
    spec = spec.copy(lam=lam)
    census = multiplicity_census(spec, None, grid, seed)
    _census_rows(result, 'lambda between lambda_a_plus and lambda1', census,
                 2)

    report = build_report(grid, spec, seed)
    e0 = find_e0(grid, spec, report.rho_hat_a_lambda or 1e-3, seed)
    energy = Operators.for_problem(grid, spec).energy(e0).total
    expected = 0.5 * report.t_a ** 2 * (report.lambda_a_plus - lam)
    result.append(('J(t_a phi1) formula', _relative(energy, expected) <= 0.05,
                   energy, expected))


def _fold_rows(result, label, rows, lambda1):
    # Every branch that turns must turn exactly once, below lambda1.
    from kirchwell.continuation import branches

    counts = []
    found = []
    for branch in branches(rows).values():
        turning = [row['lambda'] for row in branch if row['fold_flag']]
        if turning:
            counts.append(len(turning))
            found.extend(turning)
    result.append(('one fold per branch {}'.format(label),
                   bool(counts) and all(count == 1 for count in counts),
                   counts, 'all 1'))
    result.append(('fold below lambda1 {}'.format(label),
                   bool(found) and max(found) < lambda1, found,
                   '< {:.6g}'.format(lambda1)))
    return found


def _right_of_lambda1(result, rows, lambda1):
    from kirchwell.continuation import before_fold, lower_branch

    right = max([row['lambda'] for row in before_fold(lower_branch(rows))] or
                [0.0])
    result.append(('lower branch extends right of lambda1', right > lambda1,
                   right, '> {:.6g}'.format(lambda1)))


def _suite_branch(result, seed, options):
    from kirchwell.continuation import bifurcation_diagram

    positive = _problem('TP-BALL-P3-POS', options)
    grid = positive.build_grid()
    lambda1 = omega_pairs(grid, positive)[0].value
    folds = {}
    for factor in (2.0, 4.0):
        spec = _with_a0(positive, factor, seed)
        report = build_report(grid, spec, seed)
        plus = _require(report, 'lambda_a_plus')
        start = plus + 0.05 * (lambda1 - plus)
        rows = bifurcation_diagram(spec, [start, 1.2 * lambda1], [spec.a],
                                   grid, seed)
        folds[factor] = _fold_rows(result, 'at a={}a0'.format(factor), rows,
                                   lambda1)
    if folds[2.0] and folds[4.0]:
        result.append(('fold moves right with a', min(folds[4.0]) >
                       min(folds[2.0]), min(folds[4.0]), min(folds[2.0])))

    negative = _with_a0(_problem('TP-BALL-P3-NEG', options), 0.5, seed)
    rows = bifurcation_diagram(negative, [0.5 * lambda1, 1.5 * lambda1],
                               [negative.a], grid, seed)
    _right_of_lambda1(result, rows, lambda1)
