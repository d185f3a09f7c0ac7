"""
Console output for kirchwell. Diagnostics go to stderr so that anything a
sub-command prints on stdout stays machine readable.
"""
import sys

from json import dumps

import click

from kirchwell import settings


def all(message):
    """Always printed, on stdout."""
    _print(message)


def info(message):
    _print_debug(message)


def info_json(operation, payload):
    """Debug-level structured record tagged with the calling operation.

    :param str operation: e.g. ``mountain_pass``.
    :param dict payload: JSON-serializable values.
    """
    _print_debug(dumps({operation: payload}, sort_keys=True, default=_default))


def progress(message='.', new_line=False):
    if not new_line:
        click.echo(message, nl=False, err=True)
    else:
        click.echo(message, err=True)


def warn(message):
    _print_debug('WARNING: {}'.format(message))


def warn_json(operation, payload):
    _print_debug(dumps({operation: payload}, sort_keys=True, default=_default))


def error(message):
    """Errors are shown even without ``--debug``."""
    _print(message, err=True)


def error_json(operation, payload):
    _print(dumps({operation: payload}, sort_keys=True, default=_default),
           err=True)


def _default(value):
    # numpy scalars
    if hasattr(value, 'item'):
        return value.item()
    return str(value)


def _print_debug(string):
    if settings.debug is True:
        _print(string, err=True)


def _print(s, err=False):
    try:
        click.echo(s, err=err)
    except UnicodeEncodeError:
        encoding = getattr(sys.stdout, 'encoding', None) or 'ascii'
        click.echo(s.encode(encoding, 'replace').decode(encoding), err=err)
