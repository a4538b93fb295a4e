# Copyright 2026 The npspec Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import asdict, dataclass, field

from npspec import __version__
from npspec.errors import CacheError
from npspec.results import SpectralValue, SpectrumResult, SpheroidGeometry

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def spectrum_key(geometry, N, scheme, mode=0, parity=None):
    """Canonical key of a discretized spectrum: geometry, N, scheme, mode and parity."""
    return {
        'family': geometry.family,
        'geometry': geometry.as_dict(),
        'N': int(N),
        'scheme': scheme,
        'mode': mode,
        'parity': parity,
    }


def cache_key(spectrum):
    return spectrum_key(spectrum.geometry, spectrum.N, spectrum.scheme,
                        spectrum.metadata.get('mode'), spectrum.metadata.get('parity'))


def key_digest(key):
    canonical = json.dumps(key, sort_keys=True, separators=(',', ':'))
    return hashlib.sha1(canonical.encode('utf-8')).hexdigest()


@dataclass
class SpectrumCacheRecord:
    family: str
    geometry: dict
    N: int
    scheme: str
    mode: int = None
    parity: str = None
    eigenvalues: list = field(default_factory=list)
    labels: list = field(default_factory=list)
    multiplicities: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    wall_clock: float = 0.0
    version: str = __version__
    schema_version: int = SCHEMA_VERSION

    @classmethod
    def from_spectrum(cls, spectrum, wall_clock=0.0):
        key = cache_key(spectrum)
        return cls(key['family'], key['geometry'], key['N'], key['scheme'], key['mode'], key['parity'],
                   eigenvalues=[[float(v.real), float(v.imag)] for v in spectrum.values],
                   labels=[v.label for v in spectrum.values],
                   multiplicities=[v.multiplicity for v in spectrum.values],
                   metadata=dict(spectrum.metadata), wall_clock=float(wall_clock))

    @property
    def key(self):
        return {'family': self.family, 'geometry': self.geometry, 'N': self.N, 'scheme': self.scheme,
                'mode': self.mode, 'parity': self.parity}

    def to_spectrum(self):
        values = [SpectralValue(re, im, label, mult)
                  for (re, im), label, mult in zip(self.eigenvalues, self.labels, self.multiplicities)]
        return SpectrumResult(values=values, geometry=SpheroidGeometry(**self.geometry), N=self.N,
                              scheme=self.scheme, metadata=dict(self.metadata))

    def dumps(self):
        return json.dumps(asdict(self), sort_keys=True, indent=1)

    @classmethod
    def loads(cls, text, source='<string>'):
        try:
            payload = json.loads(text)
        except ValueError as e:
            raise CacheError('%s is not valid JSON: %s' % (source, e))
        if not isinstance(payload, dict) or payload.get('schema_version') != SCHEMA_VERSION:
            raise CacheError('%s has schema version %r, expected %d'
                             % (source, payload.get('schema_version') if isinstance(payload, dict) else None,
                                SCHEMA_VERSION))
        try:
            return cls(**payload)
        except TypeError as e:
            raise CacheError('%s does not match the record layout: %s' % (source, e))


class SpectrumCache(object):
    """One JSON file per spectrum, named by the SHA-1 of its key."""

    def __init__(self, directory):
        self.directory = directory

    def path(self, key):
        return os.path.join(self.directory, 'spectrum_%s.json' % key_digest(key))

    def get(self, key):
        fn = self.path(key)
        if not os.path.exists(fn):
            logger.debug('cache miss %s', fn)
            return None
        with open(fn) as f:
            record = SpectrumCacheRecord.loads(f.read(), source=fn)
        if record.key != key:
            raise CacheError('%s holds a different spectrum (%r)' % (fn, record.key))
        logger.debug('cache hit %s', fn)
        return record

    def put(self, record):
        """Write the record next to its final name and publish it with os.replace."""
        os.makedirs(self.directory, exist_ok=True)
        fn = self.path(record.key)
        fd, tmp = tempfile.mkstemp(prefix='.spectrum_', suffix='.tmp', dir=self.directory)
        try:
            with os.fdopen(fd, 'w') as f:
                f.write(record.dumps())
            os.replace(tmp, fn)
        except BaseException:
            if os.path.exists(tmp):
                os.remove(tmp)
            raise
        logger.debug('cached %s', fn)
        return fn
