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

"""Run configuration: a flat ``key = value`` text file.

Example::

    # quasi-mode runs
    pair_budget = 1e9
    oblate_r_list = 5, 10, 20
    parities = even, odd
"""

import dataclasses
import os
from dataclasses import dataclass, field

from npspec.errors import DomainError
from npspec.kernels import QUAD_EPSABS, QUAD_LIMIT
from npspec.limits import PARITIES, THETA_PANEL_POINTS, XI0_CAP
from npspec.quasimode import PAIR_BUDGET
from npspec.spectra import DEFAULT_N

CACHE_DIR = './cache'
CACHE_DIR_ENV = 'NPSPEC_CACHE_DIR'
OUTPUT_FORMATS = ('csv', 'json')

_STRING_LISTS = ('parities',)


def default_cache_dir():
    return os.environ.get(CACHE_DIR_ENV) or CACHE_DIR


@dataclass
class RunConfig:
    quad_epsabs: float = QUAD_EPSABS
    quad_limit: int = QUAD_LIMIT
    default_n: int = DEFAULT_N
    theta_panel_points: int = THETA_PANEL_POINTS
    m_max: int = 8
    parities: tuple = PARITIES
    prolate_r_list: tuple = (2.0, 5.0, 10.0, 20.0, 50.0)
    oblate_r_list: tuple = (5.0, 10.0, 20.0, 40.0)
    prolate_lambda_grid: tuple = tuple(round(0.05 * k, 2) for k in range(1, 11))
    oblate_lambda_grid: tuple = tuple(round(0.05 * k, 2) for k in range(-9, 10))
    eps: float = 0.02
    oblate_a: float = 1.0
    pair_budget: float = PAIR_BUDGET
    xi0_cap: float = XI0_CAP
    # calibration thresholds of the desk-scale checks
    prolate_residual_threshold: float = 0.05
    sidewall_slope_max: float = -1.0
    odd_negative_count: int = 3
    odd_negative_level: float = -0.05
    cache_dir: str = field(default_factory=default_cache_dir)
    output_format: str = 'csv'

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.type is tuple:
                setattr(self, f.name, tuple(value))
        for name in ('quad_epsabs', 'eps', 'oblate_a', 'pair_budget', 'xi0_cap', 'prolate_residual_threshold'):
            if not getattr(self, name) > 0:
                raise DomainError('%s must be positive, got %r' % (name, getattr(self, name)))
        for name in ('quad_limit', 'default_n', 'theta_panel_points', 'odd_negative_count'):
            if int(getattr(self, name)) != getattr(self, name) or getattr(self, name) < 1:
                raise DomainError('%s must be a positive integer, got %r' % (name, getattr(self, name)))
        if int(self.m_max) != self.m_max or self.m_max < 0:
            raise DomainError('m_max must be a nonnegative integer, got %r' % (self.m_max,))
        if not self.parities or set(self.parities) - set(PARITIES):
            raise DomainError('parities must be a nonempty subset of %s, got %r' % (PARITIES, self.parities))
        if self.output_format not in OUTPUT_FORMATS:
            raise DomainError('output_format must be one of %s, got %r' % (', '.join(OUTPUT_FORMATS),
                                                                           self.output_format))

    @classmethod
    def parse(cls, text, source='<string>'):
        types = {f.name: f.type for f in dataclasses.fields(cls)}
        values = {}
        for number, line in enumerate(text.splitlines(), 1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            key, sep, raw = (part.strip() for part in line.partition('='))
            if not sep:
                raise DomainError('%s:%d: expected "key = value", got %r' % (source, number, line))
            if key not in types:
                raise DomainError('%s:%d: unknown configuration key %r' % (source, number, key))
            try:
                values[key] = _convert(key, types[key], raw)
            except ValueError as e:
                raise DomainError('%s:%d: bad value for %s: %s' % (source, number, key, e))
        return cls(**values)

    @classmethod
    def load(cls, path):
        with open(path) as f:
            return cls.parse(f.read(), source=path)

    def dumps(self):
        lines = []
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.type is tuple:
                text = ', '.join(v if isinstance(v, str) else repr(float(v)) for v in value)
            elif f.type is float:
                text = repr(float(value))
            else:
                text = str(value)
            lines.append('%s = %s' % (f.name, text))
        return '\n'.join(lines) + '\n'

    def override(self, **flags):
        """Copy with every flag that is not None applied."""
        return dataclasses.replace(self, **{k: v for k, v in flags.items() if v is not None})


def _convert(key, kind, raw):
    if kind is tuple:
        items = [item.strip() for item in raw.split(',') if item.strip()]
        return tuple(items) if key in _STRING_LISTS else tuple(float(item) for item in items)
    if kind is int:
        value = float(raw)
        if value != int(value):
            raise ValueError('%r is not an integer' % (raw,))
        return int(value)
    if kind is float:
        return float(raw)
    return raw
