# Project imports
import json
import os
import sys

import mock
import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.dirname(os.path.dirname(os.path.dirname(os.path.realpath(__file__))))))

from kirchwell import settings
from kirchwell.errors import GridMismatchError, KirchwellError
from kirchwell.grid import GridSpec, build_grid
from kirchwell.localstorage import Store
from kirchwell.tests import helper


def test_init_creates_folder():
    temporary_folder, folder = helper.create_working_folder()
    target = os.path.join(folder, 'nested', 'out')
    Store(target)

    assert os.path.isdir(target)

def test_write_json_envelope():
    temporary_folder, folder = helper.create_working_folder()
    store = Store(folder)
    path = store.write_json('eigen.json', {'lambda1': np.float64(2.5), 'values': np.arange(3)}, {'problem': 'TP-BALL-P5'})

    with open(path, 'r') as f:
        document = json.load(f)
    assert document['schema_version'] == settings.schema_version
    assert document['config'] == {'problem': 'TP-BALL-P5'}
    assert document['lambda1'] == 2.5
    assert document['values'] == [0, 1, 2]
    assert store.read_json('eigen.json') == document

def test_write_json_is_deterministic():
    temporary_folder, folder = helper.create_working_folder()
    store = Store(folder)
    first = store.write_json('first.json', {'b': 1.0, 'a': [1, 2]})
    again = store.write_json('again.json', {'a': [1, 2], 'b': 1.0})

    assert store.checksum(first) == store.checksum(again)

def test_read_json_invalid():
    temporary_folder, folder = helper.create_working_folder()
    with open(os.path.join(folder, 'broken.json'), 'w') as f:
        f.write('{not json')

    with pytest.raises(KirchwellError):
        Store(folder).read_json('broken.json')

def test_write_csv_header():
    temporary_folder, folder = helper.create_working_folder()
    store = Store(folder)
    rows = [{'lambda': 1.0, 'norm_mu': 0.1 + 0.2}, {'lambda': 2.0, 'norm_mu': 0.5}]
    path = store.write_csv('branch.csv', ('lambda', 'norm_mu'), rows, {'seed': 0})

    with open(path, 'r') as f:
        lines = f.read().splitlines()
    assert lines[0] == '# schema_version: {}'.format(settings.schema_version)
    assert lines[1] == '# config: {"seed": 0}'
    assert lines[2] == 'lambda,norm_mu'
    assert lines[3] == '1.0,0.3'
    assert len(lines) == 5

def test_write_svg_passes_metadata():
    temporary_folder, folder = helper.create_working_folder()
    figure = mock.MagicMock()
    path = Store(folder).write_svg('branch.svg', figure, {'seed': 0})

    args, kwargs = figure.savefig.call_args
    assert args[0] == path
    assert kwargs['format'] == 'svg'
    assert json.loads(kwargs['metadata']['Description'])['config'] == {'seed': 0}

def test_field_round_trip():
    temporary_folder, folder = helper.create_working_folder()
    store = Store(folder)
    values = np.linspace(-1.0, 1.0, 17)
    store.write_field('phi1', values, {'grid_id': 'radial-3-3.0-121'})
    loaded, sidecar = store.read_field('phi1')

    assert np.array_equal(loaded, values)
    assert sidecar['length'] == 17
    assert sidecar['grid_id'] == 'radial-3-3.0-121'
    assert os.path.getsize(store.path('phi1.bin')) == 17 * 8

def test_field_checksum_mismatch():
    temporary_folder, folder = helper.create_working_folder()
    store = Store(folder)
    store.write_field('phi1', np.ones(5))
    np.zeros(5, dtype='<f8').tofile(store.path('phi1.bin'))

    with pytest.raises(KirchwellError):
        store.read_field('phi1')

def test_checksum():
    temporary_folder, folder = helper.create_working_folder()
    path = os.path.join(folder, 'data.txt')
    with open(path, 'w') as f:
        f.write('kirchwell')

    checksum = Store(folder).checksum(path)
    assert len(checksum) == 64, checksum
    assert checksum == Store(folder).checksum(path)

def test_field_belongs_to_its_grid():
    temporary_folder, folder = helper.create_working_folder()
    store = Store(folder)
    short = build_grid(GridSpec(1, 0.5, 17, 'tensor'))
    wide = build_grid(GridSpec(1, 1.0, 17, 'tensor'))
    store.write_field('e0', np.ones(short.size), grid=short)
    loaded, sidecar = store.read_field('e0', short)

    assert short.size == wide.size
    assert sidecar['grid_id'] == short.id
    assert np.array_equal(loaded, np.ones(short.size))
    with pytest.raises(GridMismatchError):
        store.read_field('e0', wide)
