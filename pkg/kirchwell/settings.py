"""
Settings used by kirchwell.
"""

from os import environ, path

#: If True, debug messages will be printed.
debug = False

#: Directory in which to store kirchwell settings.
application_directory = '{}/.kirchwell'.format(path.expanduser('~'))
if (
        'KIRCHWELL_APPLICATION_DIRECTORY' in environ and
        path.isdir(environ['KIRCHWELL_APPLICATION_DIRECTORY'])
   ):
    application_directory = environ['KIRCHWELL_APPLICATION_DIRECTORY']

#: Application config file (solver tolerances, verification defaults).
config_file = '{}/config.ini'.format(application_directory)

#: kirchwell installation directory.
script_directory = path.dirname(path.dirname(path.abspath(__file__)))

#: Version of the layout of every JSON/CSV/SVG artifact we write.
schema_version = 1

#: Default seed for every stochastic multistart.
default_seed = 0

#: Well depth used by the canonical problems ("mu sufficiently large").
default_mu = 1000.0

#: Largest well depth the census ladder will try.
mu_ladder_cap = 8000.0

#: Default solver tolerances; [Solver] in config.ini overrides any of them.
tolerances = {
    'eigen': 1e-8,
    'cg': 1e-10,
    'solve': 1e-8,
    'newton': 1e-10,
    'mountain_pass': 1e-6,
    'corrector': 1e-6,
    'dedup': 1e-3,
    'energy_dedup': 1e-6,
}

#: Default iteration caps.
iteration_caps = {
    'cg': 5000,
    'newton': 30,
    'descent': 3000,
    'sphere': 500,
    'mountain_pass': 4000,
    'deflation_starts': 12,
    'branch_points': 400,
}
