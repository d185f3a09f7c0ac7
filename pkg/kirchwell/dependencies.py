"""
Helpers for checking for and interacting with the numerical dependencies.
numpy and scipy are required; matplotlib is only needed for SVG diagrams.
"""
from __future__ import print_function

import sys
from importlib import import_module


#: Error to print when numpy or scipy can't be imported.
NUMERICS_ERROR = u"""
It looks like {} is not installed, which kirchwell requires.
Install the runtime requirements with:

    pip install -r requirements.txt
""".lstrip()


def get_module(name):
    """Import a module by name, or return None when it is missing.

    :returns: module or None
    """
    try:
        return import_module(name)
    except ImportError:
        return None


def get_pyplot():
    """Get pyplot on the non-interactive Agg backend.

    :returns: matplotlib.pyplot or None
    """
    matplotlib = get_module('matplotlib')
    if matplotlib is None:
        return None
    matplotlib.use('Agg')
    # Stable element ids in SVG output.
    matplotlib.rcParams['svg.hashsalt'] = 'kirchwell'
    return import_module('matplotlib.pyplot')


def verify_dependencies():
    """Verify that numpy and scipy are installed.

    Prints a message to stderr and returns False if any dependencies are
    missing.

    :returns: bool
    """
    for name in ('numpy', 'scipy'):
        if get_module(name) is None:
            print(NUMERICS_ERROR.format(name), file=sys.stderr)
            return False

    return True
