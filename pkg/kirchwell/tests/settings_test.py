# Project imports
import os
import sys

from importlib import reload

sys.path.insert(0, os.path.abspath(os.path.dirname(os.path.dirname(os.path.dirname(os.path.realpath(__file__))))))

from kirchwell import settings


def _reset():
    if 'KIRCHWELL_APPLICATION_DIRECTORY' in os.environ:
        del os.environ['KIRCHWELL_APPLICATION_DIRECTORY']
    reload(settings)

def test_debug():
    assert settings.debug == settings.debug, settings.debug

def test_application_directory_override_invalid():
    saved = os.environ.get('KIRCHWELL_APPLICATION_DIRECTORY')
    os.environ['KIRCHWELL_APPLICATION_DIRECTORY'] = '/foo/bar'
    reload(settings)
    directory_to_check = settings.application_directory

    _reset()
    if saved is not None:
        os.environ['KIRCHWELL_APPLICATION_DIRECTORY'] = saved
        reload(settings)

    assert directory_to_check == '{}/.kirchwell'.format(os.path.expanduser('~')), directory_to_check

def test_application_directory_override_valid():
    saved = os.environ.get('KIRCHWELL_APPLICATION_DIRECTORY')
    cwd = os.getcwd()
    os.environ['KIRCHWELL_APPLICATION_DIRECTORY'] = cwd
    reload(settings)
    directory_to_check = settings.application_directory
    config_to_check = settings.config_file

    _reset()
    if saved is not None:
        os.environ['KIRCHWELL_APPLICATION_DIRECTORY'] = saved
        reload(settings)

    assert directory_to_check == cwd, directory_to_check
    assert config_to_check == '{}/config.ini'.format(cwd), config_to_check

def test_script_directory():
    assert os.path.isfile(os.path.join(settings.script_directory, 'kirchwell.py')), settings.script_directory

def test_defaults():
    assert settings.schema_version == 1
    assert settings.default_mu == 1000.0
    assert settings.mu_ladder_cap == 8 * settings.default_mu
    assert settings.tolerances['solve'] == 1e-8
    assert settings.tolerances['dedup'] == 1e-3
