"""Load config files: the application config as a singleton, problem files
and the resolved options of one command-line run."""
from collections import OrderedDict
from configparser import Error as ConfigParserError
from configparser import RawConfigParser
from os import path

from kirchwell import settings
from kirchwell.constants import a0, gamma_p
from kirchwell.errors import ProblemError
from kirchwell.grid import GridSpec
from kirchwell.problem import canonical_problem

config_file = settings.config_file

#: Keys of a problem file, in the order they are written.
PROBLEM_KEYS = ('problem.name', 'dim', 'mode', 'L', 'n', 'a', 'p', 'lambda',
                'mu', 'g.kappa', 'c0', 'c_star', 'R_star')

#: Defaults of the [Verify] section.
VERIFY_DEFAULTS = OrderedDict([
    ('mu', settings.default_mu),
    ('seed', settings.default_seed),
    ('gap_tolerance', 0.5),
])


def load_config():
    if hasattr(load_config, "config"):
        return load_config.config

    if not path.exists(config_file):
        return {}

    load_config.config = RawConfigParser()
    load_config.config.read(config_file)
    return load_config.config


def load_solver_config():
    """Tolerances and iteration caps with the [Solver] section applied.

    :returns: tuple(dict, dict)
    """
    tolerances = dict(settings.tolerances)
    caps = dict(settings.iteration_caps)
    config = load_config()
    if 'Solver' in config:
        for key, value in config['Solver'].items():
            if key in tolerances:
                tolerances[key] = float(value)
            elif key in caps:
                caps[key] = int(value)
            else:
                raise ProblemError('unknown [Solver] key {!r} in {}'.format(
                    key, config_file))
    return tolerances, caps


def apply_solver_config():
    """Install the configured tolerances and caps in :mod:`settings`."""
    tolerances, caps = load_solver_config()
    settings.tolerances.update(tolerances)
    settings.iteration_caps.update(caps)


def load_verify_config():
    values = OrderedDict(VERIFY_DEFAULTS)
    config = load_config()
    if 'Verify' in config:
        section = config['Verify']
        for key, default in VERIFY_DEFAULTS.items():
            if key in section:
                values[key] = type(default)(float(section[key]))
    return values


def _problem_parser():
    parser = RawConfigParser(inline_comment_prefixes=('#',))
    # Keys such as L and R_star are case sensitive.
    parser.optionxform = str
    return parser


def load_problem_config(file_path):
    """Read a problem file (``key = value`` lines, ``#`` comments).

    :raises ProblemError: for unreadable files, unknown keys or names.
    :returns: :class:`~kirchwell.problem.base.ProblemSpec`
    """
    if not path.exists(file_path):
        raise ProblemError('problem file {} does not exist'.format(file_path))
    parser = _problem_parser()
    try:
        with open(file_path, 'r') as f:
            parser.read_string(u'[problem]\n' + f.read())
    except ConfigParserError as error:
        raise ProblemError('cannot parse {}: {}'.format(file_path, error))

    values = dict(parser['problem'])
    unknown = sorted(set(values) - set(PROBLEM_KEYS))
    if unknown:
        raise ProblemError('unknown keys in {}: {}'.format(
            file_path, ', '.join(unknown)))
    if 'problem.name' not in values:
        raise ProblemError('{} does not name a problem (problem.name)'.format(
            file_path))

    overrides = {}
    numbers = {'a': 'a', 'p': 'p', 'lambda': 'lam', 'mu': 'mu',
               'g.kappa': 'kappa', 'c0': 'c0', 'c_star': 'c_star',
               'R_star': 'R_star'}
    try:
        for key, name in numbers.items():
            if key in values and values[key] not in ('', 'None'):
                overrides[name] = float(values[key])
        if 'dim' in values or 'n' in values or 'L' in values or \
                'mode' in values:
            grid_values = {
                'dim': int(values.get('dim', 3)),
                'half_length': float(values['L']),
                'nodes': int(values['n']),
                'mode': values.get('mode', 'tensor'),
            }
            overrides['grid_spec'] = GridSpec(**grid_values)
    except (KeyError, ValueError) as error:
        raise ProblemError('bad value in {}: {}'.format(file_path, error))
    if 'dim' in values:
        overrides['N'] = int(values['dim'])
    return canonical_problem(values['problem.name'], **overrides)


def write_problem_config(spec, file_path):
    """Write ``spec`` in the problem file format."""
    lines = ['# kirchwell problem, schema {}'.format(settings.schema_version)]
    config = spec.to_config()
    for key in PROBLEM_KEYS:
        value = config.get(key)
        if value is not None:
            lines.append('{} = {}'.format(key, value))
    with open(file_path, 'w') as f:
        f.write('\n'.join(lines) + '\n')
    return file_path


def resolve_a(text, a0=None):
    """Parse the ``--a`` option: a number, or a multiple of a0(p) such as
    ``0.5a0`` or ``2a0``.

    :param a0: Value of a0(p), or a callable computing it on demand.
    :raises ProblemError:
    :returns: float
    """
    text = str(text).strip()
    if not text.endswith('a0'):
        try:
            return float(text)
        except ValueError:
            raise ProblemError('cannot read a from {!r}'.format(text))

    factor = text[:-2].strip().rstrip('*')
    try:
        factor = float(factor) if factor else 1.0
    except ValueError:
        raise ProblemError('cannot read a from {!r}'.format(text))
    if a0 is None:
        raise ProblemError('{!r} needs a0(p)'.format(text))
    value = a0() if callable(a0) else a0
    return factor * float(value)


class RunConfig(object):

    """Resolved options of one sub-command.

    :ivar str subcommand:
    :ivar str problem: Canonical name, when no config file is given.
    :ivar str config_path: Problem file.
    :ivar dict overrides: Raw option values (a, p, lambda, mu, kappa,
        grid_n, mode); None entries are ignored.
    :ivar str out: Output directory.
    :ivar int seed:
    """

    def __init__(self, subcommand, problem=None, config_path=None,
                 overrides=None, out=None, seed=None, debug=False):
        self.subcommand = subcommand
        self.problem = problem
        self.config_path = config_path
        self.overrides = OrderedDict(
            (key, value) for key, value in sorted((overrides or {}).items())
            if value is not None)
        self.out = out
        self.seed = settings.default_seed if seed is None else int(seed)
        self.debug = debug
        self.resolved = OrderedDict()

    def build_spec(self):
        """Problem with every override applied and validated.

        :raises ProblemError:
        :returns: :class:`~kirchwell.problem.base.ProblemSpec`
        """
        if self.config_path:
            spec = load_problem_config(self.config_path)
        elif self.problem:
            spec = canonical_problem(self.problem)
        else:
            raise ProblemError('give --problem or --config')

        fields = {'p': 'p', 'lambda': 'lam', 'mu': 'mu', 'kappa': 'kappa'}
        changes = {}
        for key, name in fields.items():
            if key in self.overrides:
                changes[name] = float(self.overrides[key])
        grid_changes = {}
        if 'grid_n' in self.overrides:
            grid_changes['nodes'] = int(self.overrides['grid_n'])
        if 'mode' in self.overrides:
            grid_changes['mode'] = self.overrides['mode']
        if grid_changes:
            changes['grid_spec'] = spec.grid_spec.copy(**grid_changes)
        if changes:
            spec = spec.copy(**changes).validate()

        if 'a' in self.overrides:
            def compute_a0():
                if not spec.p < 4:
                    raise ProblemError(
                        'a0(p) is defined for p < 4 only (p={})'.format(
                            spec.p))
                grid = spec.build_grid()
                data = spec.nodal(grid)
                estimate = gamma_p(grid, data.f, data.g, spec.p, data.omega,
                                   seed=self.seed)
                return a0(spec.p, estimate.value)
            spec = spec.copy(a=resolve_a(self.overrides['a'], compute_a0))
            spec.validate()

        self.resolved = OrderedDict(sorted(spec.to_config().items()))
        return spec

    def to_dict(self):
        return OrderedDict([
            ('subcommand', self.subcommand),
            ('problem', self.problem),
            ('config', self.config_path),
            ('overrides', self.overrides),
            ('seed', self.seed),
            ('resolved', self.resolved),
        ])
