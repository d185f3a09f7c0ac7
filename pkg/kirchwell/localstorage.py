"""
Methods for writing and reading the artifacts kirchwell produces: JSON
reports, CSV tables, SVG figures and binary nodal fields with JSON sidecars.
Every artifact embeds the schema version and the resolved run config.
"""
import csv
import hashlib
import json
import os

import numpy as np

from kirchwell import log, settings
from kirchwell.errors import KirchwellError


class Store(object):

    """Artifacts of one run, written under ``out_dir``."""

    def __init__(self, out_dir):
        self.out_dir = os.path.abspath(os.path.expanduser(out_dir))
        # verify that the output directory exists, else create it
        if not os.path.exists(self.out_dir):
            os.makedirs(self.out_dir)

    def path(self, name):
        return os.path.join(self.out_dir, name)

    def _envelope(self, payload, config):
        document = {
            'schema_version': settings.schema_version,
            'config': config or {},
        }
        document.update(payload)
        return document

    def write_json(self, name, payload, config=None):
        """Write a JSON document with sorted keys.

        :param str name: File name inside the output directory.
        :param dict payload: JSON-serializable values.
        :param dict config: Resolved run config.
        :returns: str path written
        """
        target = self.path(name)
        with open(target, 'w') as f:
            json.dump(self._envelope(payload, config), f, sort_keys=True,
                      indent=2, default=_default)
            f.write('\n')
        log.info('wrote {}'.format(target))
        return target

    def read_json(self, name):
        with open(self.path(name), 'r') as f:
            try:
                return json.load(f)
            except ValueError:
                raise KirchwellError('{} is not valid JSON'.format(name))

    def write_csv(self, name, header, rows, config=None):
        """Write a CSV table; leading ``#`` lines carry the schema version
        and the config."""
        target = self.path(name)
        with open(target, 'w') as f:
            f.write('# schema_version: {}\n'.format(settings.schema_version))
            f.write('# config: {}\n'.format(json.dumps(
                config or {}, sort_keys=True, default=_default)))
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(header)
            for row in rows:
                writer.writerow([_cell(row[column]) for column in header])
        log.info('wrote {}'.format(target))
        return target

    def write_svg(self, name, figure, config=None):
        """Save a matplotlib figure as SVG with the config in its metadata."""
        target = self.path(name)
        metadata = {'Date': None, 'Description': json.dumps(
            self._envelope({}, config), sort_keys=True, default=_default)}
        figure.savefig(target, format='svg', metadata=metadata)
        log.info('wrote {}'.format(target))
        return target

    def write_field(self, name, values, sidecar=None, config=None, grid=None):
        """Write nodal values as little-endian float64 ``<name>.bin`` plus a
        ``<name>.json`` sidecar holding the checksum of the binary file and,
        when ``grid`` is given, its id."""
        binary = self.path('{}.bin'.format(name))
        np.asarray(values, dtype='<f8').tofile(binary)
        payload = dict(sidecar or {})
        if grid is not None:
            payload['grid_id'] = grid.id
        payload['length'] = int(np.asarray(values).shape[0])
        payload['sha256'] = self.checksum(binary)
        payload['binary'] = os.path.basename(binary)
        self.write_json('{}.json'.format(name), payload, config)
        return binary

    def read_field(self, name, grid=None):
        """Read a field written by :meth:`write_field`.

        :param grid: When given, the field must have been written for it.
        :raises KirchwellError: when the checksum does not match.
        :raises GridMismatchError: when the field belongs to another grid.
        :returns: tuple(numpy.ndarray, dict)
        """
        sidecar = self.read_json('{}.json'.format(name))
        binary = self.path(sidecar['binary'])
        if self.checksum(binary) != sidecar['sha256']:
            raise KirchwellError('checksum mismatch for {}'.format(binary))
        values = np.fromfile(binary, dtype='<f8')
        if grid is not None:
            values = grid.check(values, sidecar.get('grid_id'))
        return values, sidecar

    def checksum(self, file_path, blocksize=65536):
        """Create a hash value for the given file.

        :param str file_path: Path to the file to create a hash for.
        :param int blocksize: Read blocks of this size from the file when
            creating the hash.
        :returns: str or None
        """
        hasher = hashlib.sha256()
        with open(file_path, 'rb') as f:
            buf = f.read(blocksize)

            while len(buf) > 0:
                hasher.update(buf)
                buf = f.read(blocksize)
            return hasher.hexdigest()
        return None


def _cell(value):
    if isinstance(value, float):
        return repr(float('%.12g' % value))
    return value


def _default(value):
    if hasattr(value, 'tolist'):
        return value.tolist()
    if hasattr(value, 'to_dict'):
        return value.to_dict()
    return str(value)
