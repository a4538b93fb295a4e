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

"""Value types shared between the analytic and discrete spectrum code."""

import logging
import math
from dataclasses import dataclass, field, asdict

import numpy as np

from npspec.errors import DomainError, SpectralBoundError

logger = logging.getLogger(__name__)

FAMILIES = ('prolate', 'oblate', 'flat')
SPECTRAL_BOUND = 0.51
IMAG_RTOL = 1e-6


@dataclass(frozen=True)
class ModeIndex:
    """Spheroidal mode (n, m) with n >= 1 and |m| <= n."""
    n: int
    m: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or int(self.m) != self.m:
            raise DomainError('mode indices must be integers, got (%r, %r)' % (self.n, self.m))
        if self.n < 1 or abs(self.m) > self.n:
            raise DomainError('need n >= 1 and |m| <= n, got (%r, %r)' % (self.n, self.m))

    @classmethod
    def of(cls, mode):
        if isinstance(mode, cls):
            return mode
        n, m = mode
        return cls(int(n), int(m))

    def __str__(self):
        return 'n=%d,m=%d' % (self.n, self.m)


@dataclass(frozen=True)
class SpheroidGeometry:
    """Family tag plus the shape parameters that apply to it."""
    family: str
    R: float = None
    L: float = None
    a: float = None
    base_radius: float = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError('unknown family %r, expected one of %s' % (self.family, ', '.join(FAMILIES)))

    def as_dict(self):
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass(frozen=True)
class SpectralValue:
    real: float
    imag: float = 0.0
    label: str = ''
    multiplicity: int = 1


@dataclass
class SpectrumResult:
    """Eigenvalues with labels, imaginary residuals and provenance."""
    values: list
    geometry: SpheroidGeometry
    N: int = None
    scheme: str = None
    metadata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.values)

    @property
    def real(self):
        return np.array([v.real for v in self.values])

    @property
    def imag(self):
        return np.array([v.imag for v in self.values])

    @property
    def labels(self):
        return [v.label for v in self.values]

    def expanded(self):
        """Real parts repeated by multiplicity."""
        return np.array([v.real for v in self.values for _ in range(v.multiplicity)])

    def max_imag_residual(self):
        if not self.values:
            return 0.0
        return float(np.max(np.abs(self.imag) / (1.0 + np.abs(self.real))))

    def imag_within_tolerance(self, rtol=IMAG_RTOL):
        return self.max_imag_residual() < rtol

    def check_bounds(self, bound=SPECTRAL_BOUND):
        real = self.real
        outside = real[np.abs(real) >= bound]
        if outside.size:
            raise SpectralBoundError('%d eigenvalue(s) outside (-%g, %g), e.g. %r (%s)'
                                     % (outside.size, bound, bound, float(outside[0]), self.describe()))
        return self

    def describe(self):
        parts = ['%s=%s' % kv for kv in sorted(self.geometry.as_dict().items())]
        if self.N is not None:
            parts.append('N=%d' % self.N)
        if self.scheme:
            parts.append('scheme=%s' % self.scheme)
        return ' '.join(parts)

    def to_dict(self):
        return {
            'geometry': self.geometry.as_dict(),
            'N': self.N,
            'scheme': self.scheme,
            'metadata': dict(self.metadata),
            'eigenvalues': [[v.real, v.imag, v.label, v.multiplicity] for v in self.values],
        }

    @classmethod
    def from_dict(cls, payload):
        values = [SpectralValue(float(re), float(im), str(label), int(mult))
                  for re, im, label, mult in payload['eigenvalues']]
        return cls(values=values, geometry=SpheroidGeometry(**payload['geometry']),
                   N=payload.get('N'), scheme=payload.get('scheme'),
                   metadata=dict(payload.get('metadata', {})))


def nearest_distance(values, targets):
    """Distance from each target to the closest value (inf when ``values`` is empty)."""
    values = np.sort(np.asarray(values, dtype=float).ravel())
    targets = np.asarray(targets, dtype=float)
    if values.size == 0:
        return np.full(targets.shape, math.inf)
    pos = np.clip(np.searchsorted(values, targets), 1, max(values.size - 1, 1))
    left = np.abs(targets - values[pos - 1])
    right = np.abs(values[np.minimum(pos, values.size - 1)] - targets)
    return np.minimum(left, right)
