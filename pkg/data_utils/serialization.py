# coding=utf-8
"""Binary instance container with a JSON sidecar.

Layout (all little endian): a fixed header record, then A row-major as f8,
b as f8, the support as i8, the planted values as f8 and, for DCT
instances, the sampling points w as f8.
"""

import hashlib
import json
import logging
import os

import numpy as np

from composite.errors import InvalidInputError

from .instances import DCT, FAMILIES, Instance, InstanceSpec

logger = logging.getLogger(__name__)

MAGIC = b'FBEINST\x00'
FORMAT_VERSION = 1
INSTANCE_SUFFIX = '.inst'
SIDECAR_SUFFIX = '.json'

HEADER_DTYPE = np.dtype([
    ('magic', 'S8'),
    ('version', '<u4'),
    ('family', '<u4'),
    ('m', '<u8'),
    ('n', '<u8'),
    ('s', '<u8'),
    ('sigma', '<f8'),
    ('F', '<u8'),
    ('seed', '<u8'),
    ('has_w', '<u4'),
])

F8 = np.dtype('<f8')
I8 = np.dtype('<i8')


def instance_to_bytes(instance):
    spec = instance.spec
    header = np.zeros(1, dtype=HEADER_DTYPE)
    header['magic'] = MAGIC
    header['version'] = FORMAT_VERSION
    header['family'] = FAMILIES.index(spec.family)
    header['m'] = spec.m
    header['n'] = spec.n
    header['s'] = spec.s
    header['sigma'] = spec.sigma
    header['F'] = spec.F
    header['seed'] = spec.seed
    header['has_w'] = int(instance.w is not None)
    chunks = [header.tobytes(),
              instance.A.astype(F8).tobytes(order='C'),
              instance.b.astype(F8).tobytes(),
              instance.support.astype(I8).tobytes(),
              instance.values.astype(F8).tobytes()]
    if instance.w is not None:
        chunks.append(instance.w.astype(F8).tobytes())
    return b''.join(chunks)


def instance_from_bytes(data):
    if len(data) < HEADER_DTYPE.itemsize:
        raise InvalidInputError('truncated instance header')
    header = np.frombuffer(data, dtype=HEADER_DTYPE, count=1)[0]
    if bytes(header['magic']) != MAGIC.rstrip(b'\x00'):
        raise InvalidInputError('not an instance file (bad magic)')
    if int(header['version']) != FORMAT_VERSION:
        raise InvalidInputError('unsupported instance format version {}'.format(int(header['version'])))
    if int(header['family']) >= len(FAMILIES):
        raise InvalidInputError('unknown family index {}'.format(int(header['family'])))
    spec =InstanceSpec(FAMILIES[int(header['family'])], int(header['m']), int(header['n']), int(header['s']),
                        sigma=float(header['sigma']), F=int(header['F']), seed=int(header['seed']))
    m, n, s = spec.m, spec.n, spec.s
    sizes = [(F8, m * n), (F8, m), (I8, s), (F8, s)]
    if int(header['has_w']):
        sizes.append((F8, m))
    expected = HEADER_DTYPE.itemsize + sum(dtype.itemsize * count for dtype, count in sizes)
    if len(data) != expected:
        raise InvalidInputError('instance payload has {} bytes, expected {}'.format(len(data), expected))

    arrays = []
    offset = HEADER_DTYPE.itemsize
    for dtype, count in sizes:
        arrays.append(np.frombuffer(data, dtype=dtype, count=count, offset=offset).copy())
        offset += dtype.itemsize * count
    A = arrays[0].reshape(m, n)
    w = arrays[4] if len(arrays) > 4 else None
    if spec.family == DCT and w is None:
        logger.warning('DCT instance %s stored without sampling points', spec.name)
    return Instance(spec, A, arrays[1], arrays[2], arrays[3], w=w)


def sidecar_path(path):
    return os.path.splitext(path)[0] + SIDECAR_SUFFIX


def save_instance(instance, path):
    """Write the binary container and its JSON sidecar; returns the sha256 digest."""
    data = instance_to_bytes(instance)
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'wb') as output:
        output.write(data)
    digest = hashlib.sha256(data).hexdigest()
    sidecar = {'version': FORMAT_VERSION, 'spec': instance.spec.to_dict(), 'sha256': digest,
               'bytes': len(data)}
    with open(sidecar_path(path), 'w') as output:
        json.dump(sidecar, output, sort_keys=True, indent=2)
    return digest


def load_instance(path):
    with open(path, 'rb') as file:
        data = file.read()
    instance = instance_from_bytes(data)
    side = sidecar_path(path)
    if os.path.exists(side):
        with open(side) as file:
            sidecar = json.load(file)
        if sidecar.get('sha256') != hashlib.sha256(data).hexdigest():
            raise InvalidInputError('checksum mismatch between {} and {}'.format(path, side))
        if InstanceSpec.from_dict(sidecar['spec']) != instance.spec:
            raise InvalidInputError('sidecar spec does not match header in {}'.format(path))
    return instance
