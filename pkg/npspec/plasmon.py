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

"""Quasi-static plasmon resonance: (k + 1) / (2 (k - 1)) = lambda."""

import logging
from dataclasses import dataclass

from npspec.errors import DomainError, PoleError
from npspec.results import SpectrumResult

logger = logging.getLogger(__name__)

# eigenvalues this close to 1/2 belong to the constant density
TOP_TOLERANCE = 1e-8


@dataclass(frozen=True)
class ResonancePair:
    lam: float
    k: float
    label: str = ''

    def as_row(self):
        return [self.label, self.lam, self.k]


def dielectric_for_eigenvalue(lam):
    """k = (2 lambda + 1) / (2 lambda - 1)."""
    lam = float(lam)
    if lam == 0.5:
        raise PoleError('lambda = 1/2 has no finite dielectric constant')
    if not -0.5 <= lam < 0.5:
        raise DomainError('NP eigenvalues lie in [-1/2, 1/2), got %r' % (lam,))
    return (2.0 * lam + 1.0) / (2.0 * lam - 1.0)


def eigenvalue_for_dielectric(k):
    k = float(k)
    if k == 1.0:
        raise PoleError('k = 1 (no contrast) has no resonant eigenvalue')
    return (k + 1.0) / (2.0 * (k - 1.0))


def sort_pairs(pairs):
    """ResonancePairs ordered by |k| ascending, ties kept in input order."""
    return sorted(pairs, key=lambda pair: abs(pair.k))


def resonance_table(spectrum):
    """ResonancePairs of a SpectrumResult or an iterable of eigenvalues, sorted by |k|.

    The top of the spectrum (lambda = 1/2, the constant density) has no
    resonance and is skipped.
    """
    if isinstance(spectrum, SpectrumResult):
        entries = list(zip(spectrum.real, spectrum.labels))
    else:
        entries = [(float(lam), '') for lam in spectrum]
    pairs = []
    skipped = 0
    for lam, label in entries:
        if abs(lam - 0.5) < TOP_TOLERANCE:
            skipped += 1
            continue
        pairs.append(ResonancePair(float(lam), dielectric_for_eigenvalue(lam), label))
    if skipped:
        logger.debug('skipped %d eigenvalue(s) at 1/2 without a resonance', skipped)
    return sort_pairs(pairs)


def sphere_resonances(n_max):
    """k = -(n + 1) / n for the sphere modes n = 1..n_max."""
    if n_max < 1:
        raise DomainError('n_max must be positive, got %r' % (n_max,))
    return [ResonancePair(0.5 / (2 * n + 1), -(n + 1.0) / n, 'n=%d' % n) for n in range(1, n_max + 1)]
