#!/usr/bin/env python

from __future__ import print_function
import sys
from functools import wraps

import click

# Verify that external dependencies are present first, so the user gets a
# more user-friendly error instead of an ImportError traceback.
from kirchwell.dependencies import verify_dependencies
if not verify_dependencies():
    sys.exit(1)

from kirchwell import log
from kirchwell import settings
from kirchwell.config import RunConfig, apply_solver_config, resolve_a
from kirchwell.constants import d0_bound, build_report
from kirchwell.continuation import (CSV_COLUMNS, bifurcation_diagram,
                                    plot_diagram)
from kirchwell.dependencies import get_pyplot
from kirchwell.eigen import SCAN_COLUMNS, mu_convergence_scan, mu_pairs, \
    omega_pairs
from kirchwell.errors import (ConditionError, GeometryError, KirchwellError,
                              SolverError)
from kirchwell.localstorage import Store
from kirchwell.problem import validate_conditions
from kirchwell.solvers import (check_geometry, find_e0, multiplicity_census,
                               path_energy_cap)
from kirchwell.verify import SUITES, verify_suite


def problem_options(command):
    """Options every problem-driven sub-command shares."""
    options = [
        click.option('--problem', help='Canonical problem name, e.g. '
                     'TP-BALL-P5.'),
        click.option('--config', 'config_path',
                     type=click.Path(dir_okay=False, exists=True),
                     help='Problem file (key = value lines).'),
        click.option('--a', help='Nonlocal coefficient; accepts 0.5a0 or '
                     '2a0.'),
        click.option('--p', type=float, help='Exponent p.'),
        click.option('--lambda', 'lam', type=float, help='Weight lambda.'),
        click.option('--mu', type=float, help='Well depth mu.'),
        click.option('--kappa', type=float, help='Shift kappa of g.'),
        click.option('--grid-n', type=int, help='Nodes per axis.'),
        click.option('--mode', type=click.Choice(['tensor', 'radial']),
                     help='Grid mode.'),
        click.option('--out', type=click.Path(file_okay=False),
                     default='out', help='Write artifacts into this '
                     'directory.'),
        click.option('--seed', type=int, default=None,
                     help='Seed of every multistart (default 0).'),
        click.option('--debug', default=False, is_flag=True,
                     help='Override the value in settings.py with True.'),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _run_config(subcommand, problem, config_path, a, p, lam, mu, kappa,
                grid_n, mode, out, seed, debug):
    settings.debug = debug
    apply_solver_config()
    overrides = {'a': a, 'p': p, 'lambda': lam, 'mu': mu, 'kappa': kappa,
                 'grid_n': grid_n, 'mode': mode}
    return RunConfig(subcommand, problem, config_path, overrides, out, seed,
                     debug)


def exits_on_error(command):
    """Map :class:`KirchwellError` to its exit code."""
    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except KirchwellError as error:
            log.error('{}: {}'.format(type(error).__name__, error))
            sys.exit(error.exit_code)
    return wrapper


@click.command('eigen')
@problem_options
@exits_on_error
def _eigen(problem, config_path, a, p, lam, mu, kappa, grid_n, mode, out,
           seed, debug):
    """Principal eigenpairs on Omega and with the well, plus a scan in mu.
    """
    config = _run_config('eigen', problem, config_path, a, p, lam, mu, kappa,
                         grid_n, mode, out, seed, debug)
    spec = config.build_spec()
    grid = spec.build_grid()
    store = Store(out)

    first, second = omega_pairs(grid, spec)
    first_mu, second_mu = mu_pairs(grid, spec)
    ladder = sorted(set([1.0, 10.0, 100.0, spec.mu]))
    rows = mu_convergence_scan(spec, ladder, grid)

    payload = {
        'lambda1': first.to_dict(), 'lambda2': second.to_dict(),
        'lambda1_mu': first_mu.to_dict(), 'lambda2_mu': second_mu.to_dict(),
        'scan': rows, 'grid': grid.spec.to_dict(),
    }
    store.write_json('eigen.json', payload, config.to_dict())
    store.write_csv('eigen_scan.csv', SCAN_COLUMNS, rows, config.to_dict())
    for name, pair in (('phi1', first), ('phi1_mu', first_mu)):
        store.write_field(name, pair.field, dict(pair.to_dict(),
                          grid=grid.spec.to_dict()), config.to_dict(),
                          grid=grid)
    log.all('lambda1={:.10g} lambda2={:.10g} lambda1_mu={:.10g} '
            'lambda2_mu={:.10g}'.format(first.value, second.value,
                                        first_mu.value, second_mu.value))


def _constants_report(spec, grid, seed):
    report = build_report(grid, spec, seed)
    if spec.p > 4 and report.rho_a_lambda:
        try:
            e0 = find_e0(grid, spec, report.rho_a_lambda, seed)
        except GeometryError as error:
            log.warn('constants: no D0 ({})'.format(error))
        else:
            D0 = path_energy_cap(grid, spec, e0)
            report.update(D0=D0, d0_bound=d0_bound(
                spec.p, spec.lam, spec.a, report.S, report.f_norm_N2, D0))
    return report


@click.command('constants')
@problem_options
@exits_on_error
def _constants(problem, config_path, a, p, lam, mu, kappa, grid_n, mode, out,
               seed, debug):
    """Every closed-form constant, threshold and the regime, as JSON.
    """
    config = _run_config('constants', problem, config_path, a, p, lam, mu,
                         kappa, grid_n, mode, out, seed, debug)
    spec = config.build_spec()
    grid = spec.build_grid()
    report = _constants_report(spec, grid, config.seed)
    payload = report.to_dict()
    require_h3 = spec.N == 3 and spec.p < 4 and \
        spec.c_star is not None and spec.R_star is not None
    payload['conditions'] = validate_conditions(spec, grid,
                                                require_h3).to_dict()
    target = Store(out).write_json('constants.json', payload,
                                   config.to_dict())
    log.all(target)


@click.command('geometry')
@click.option('--rho', type=float,
              help='Sphere radius; the radius of the regime by default.')
@problem_options
@exits_on_error
def _geometry(rho, problem, config_path, a, p, lam, mu, kappa, grid_n, mode,
              out, seed, debug):
    """Certify J > 0 on a sphere and J(e0) < 0 outside it.
    """
    config = _run_config('geometry', problem, config_path, a, p, lam, mu,
                         kappa, grid_n, mode, out, seed, debug)
    spec = config.build_spec()
    grid = spec.build_grid()
    radius_name = 'rho'
    if rho is None:
        report = build_report(grid, spec, config.seed)
        regime = report.regime
        if regime is None or regime.radius is None or \
                report.values.get(regime.radius) is None:
            raise ConditionError(
                'geometry: no sphere radius for regime {}; pass --rho'.format(
                    None if regime is None else regime.name))
        radius_name = regime.radius
        rho = report.values[radius_name]

    geometry = check_geometry(grid, spec, rho, radius_name, config.seed)
    store = Store(out)
    store.write_json('geometry.json', geometry.to_dict(), config.to_dict())
    store.write_field('e0', geometry.e0, {'energy': geometry.e0_energy,
                      'grid': grid.spec.to_dict()}, config.to_dict(),
                      grid=grid)
    log.all('sphere_min={:.6g} J(e0)={:.6g} |e0|={:.6g} rho={:.6g}'.format(
        geometry.sphere_min, geometry.e0_energy, geometry.e0_norm, rho))
    if not geometry.passed:
        sys.exit(1)


def _write_census(store, census, grid, config):
    store.write_json('census.json', census.to_dict(), config.to_dict())
    for index, result in enumerate(census):
        sidecar = dict(result.to_dict(), grid=grid.spec.to_dict())
        store.write_field('solution_{}'.format(index), result.field, sidecar,
                          config.to_dict(), grid=grid)
    log.all('found {} positive solution(s), energies {}'.format(
        census.count, ', '.join('{:.6g}'.format(result.energy)
                                for result in census if result.positive)))


@click.command('solve')
@problem_options
@exits_on_error
def _solve(problem, config_path, a, p, lam, mu, kappa, grid_n, mode, out,
           seed, debug):
    """Find positive solutions at the given well depth.
    """
    config = _run_config('solve', problem, config_path, a, p, lam, mu, kappa,
                         grid_n, mode, out, seed, debug)
    spec = config.build_spec()
    grid = spec.build_grid()
    census = multiplicity_census(spec, grid=grid, seed=config.seed,
                                 ladder=False)
    _write_census(Store(out), census, grid, config)
    if census.count == 0:
        raise SolverError('solve: no positive solution found ({})'.format(
            '; '.join(census.notes) or 'every search came back empty'))


@click.command('census')
@problem_options
@exits_on_error
def _census(problem, config_path, a, p, lam, mu, kappa, grid_n, mode, out,
            seed, debug):
    """Count positive solutions against the prediction, raising mu when
    short.
    """
    config = _run_config('census', problem, config_path, a, p, lam, mu,
                         kappa, grid_n, mode, out, seed, debug)
    spec = config.build_spec()
    grid = spec.build_grid()
    census = multiplicity_census(spec, grid=grid, seed=config.seed)
    _write_census(Store(out), census, grid, config)
    if census.count < census.predicted:
        log.error('census: {} of {} predicted solutions'.format(
            census.count, census.predicted))
        sys.exit(1)


@click.command('branch')
@click.option('--lambda-end', type=float,
              help='Last lambda of the range; 1.5 lambda1 by default.')
@click.option('--also-a', multiple=True,
              help='Further values of a (0.5a0 style accepted).')
@problem_options
@exits_on_error
def _branch(lambda_end, also_a, problem, config_path, a, p, lam, mu, kappa,
            grid_n, mode, out, seed, debug):
    """Trace solution branches in lambda and draw the diagram.
    """
    config = _run_config('branch', problem, config_path, a, p, lam, mu,
                         kappa, grid_n, mode, out, seed, debug)
    spec = config.build_spec()
    grid = spec.build_grid()
    lambda1 = omega_pairs(grid, spec)[0].value
    if lambda_end is None:
        lambda_end = 1.5 * lambda1

    a_list = [spec.a]
    for text in also_a:
        a_list.append(resolve_a(text, lambda: spec.a / _a_factor(config)))
    config.resolved['a_list'] = a_list

    rows = bifurcation_diagram(spec, [spec.lam, lambda_end], a_list, grid,
                               config.seed)
    store = Store(out)
    store.write_csv('branch.csv', CSV_COLUMNS, rows, config.to_dict())
    pyplot = get_pyplot()
    if pyplot is None:
        log.warn('branch: matplotlib is not installed, no SVG written')
    else:
        figure = plot_diagram(rows, pyplot)
        if figure is not None:
            store.write_svg('branch.svg', figure, config.to_dict())
            pyplot.close(figure)
    log.all('{} branch point(s), {} fold(s)'.format(
        len(rows), sum(row['fold_flag'] for row in rows)))
    if not rows:
        raise SolverError('branch: no branch could be traced')


def _a_factor(config):
    # a0 from the resolved a when --a used the shorthand.
    text = str(config.overrides.get('a', ''))
    if not text.endswith('a0'):
        raise ConditionError('--also-a with a0 needs --a given as a multiple '
                             'of a0')
    factor = text[:-2].strip().rstrip('*')
    return float(factor) if factor else 1.0


@click.command('verify')
@click.option('--suite', default='all',
              help='One of {}, all.'.format(', '.join(SUITES)))
@click.option('--out', type=click.Path(file_okay=False),
              help='Also write verify.json into this directory.')
@click.option('--seed', type=int, default=None,
              help='Seed of every multistart.')
@click.option('--debug', default=False, is_flag=True,
              help='Override the value in settings.py with True.')
@exits_on_error
def _verify(suite, out, seed, debug):
    """Run verification suites and print a pass/fail summary.
    """
    settings.debug = debug
    apply_solver_config()
    result = verify_suite(suite, seed)
    result.write()
    if out:
        Store(out).write_json('verify.json', result.to_dict(),
                              {'subcommand': 'verify', 'suite': suite,
                               'seed': seed})
    if not result.passed:
        sys.exit(1)


@click.group()
def main():
    pass


main.add_command(_eigen)
main.add_command(_constants)
main.add_command(_geometry)
main.add_command(_solve)
main.add_command(_census)
main.add_command(_branch)
main.add_command(_verify)


def run(argv=None):
    """Run the command line and return its exit code; usage errors give 3.
    """
    try:
        main.main(args=argv, prog_name='kirchwell', standalone_mode=False)
    except click.UsageError as error:
        error.show()
        return 3
    except click.Abort:
        return 1
    except SystemExit as exit:
        return exit.code or 0
    return 0


if __name__ == '__main__':
    sys.exit(run())
