import mock

from kirchwell.dependencies import get_module, get_pyplot, verify_dependencies


def test_get_module():
    assert get_module('json') is not None
    assert get_module('kirchwell_does_not_exist') is None

@mock.patch('kirchwell.dependencies.get_module')
def test_verify_dependencies(mock_get_module):
    mock_get_module.return_value = object()
    assert verify_dependencies() is True

    mock_get_module.return_value = None
    assert verify_dependencies() is False

@mock.patch('kirchwell.dependencies.get_module')
def test_get_pyplot_without_matplotlib(mock_get_module):
    mock_get_module.return_value = None

    assert get_pyplot() is None
