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

"""Exact NP eigenvalues of prolate spheroids.

In spheroidal coordinates the surface xi = L carries the eigenvalues::

    lambda_{m,n}(L) = -1/2 (-1)^m (n-m)!/(n+m)! (L^2 - 1) (P_n^m Q_n^m)'(L)

for n >= 1 and |m| <= n, with lambda_{-m,n} = lambda_{m,n}. After dilation
the spheroid has aspect ratio R = L / sqrt(L^2 - 1).
"""

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from npspec.errors import DomainError, NearSingularWarning, RangeError
from npspec.results import ModeIndex, SpectralValue, SpectrumResult, SpheroidGeometry
from npspec.specfun import BRENT_RTOL, NEAR_SINGULAR_GAP, legendre_pq_scaled_derivative

logger = logging.getLogger(__name__)

MAX_DEGREE = 50
TUNE_TOLERANCE = 1e-10
SCAN_LOG_RANGE = (-6.0, 5.0)
SAMPLES_PER_DECADE = 10


def _aspect(x, name):
    x = float(x)
    if not x > 1.0:
        raise DomainError('%s must be > 1, got %r' % (name, x))
    if math.isinf(x):
        return 1.0
    return x / math.sqrt((x - 1.0) * (x + 1.0))


def l_to_r(L):
    """Aspect ratio R = L / sqrt(L^2 - 1) of the spheroid xi = L."""
    return _aspect(L, 'L')


def r_to_l(R):
    """Inverse of :func:`l_to_r`; the map is its own inverse."""
    return _aspect(R, 'R')


@dataclass(frozen=True)
class ProlateShape:
    L: float
    R: float

    @classmethod
    def from_L(cls, L):
        return cls(float(L), l_to_r(L))

    @classmethod
    def from_R(cls, R):
        return cls(r_to_l(R), float(R))


@dataclass(frozen=True)
class EigenvalueEntry:
    mode: ModeIndex
    shape: ProlateShape
    value: float


def sphere_eigenvalue(n):
    """1/(2(2n + 1)), the limit of every lambda_{m,n} as L -> infinity."""
    return 0.5 / (2 * n + 1)


def eigenvalue(mode, L):
    """NP eigenvalue lambda_{m,n}(L) of the prolate spheroid xi = L.

    Args:
        mode: :class:`ModeIndex` or an ``(n, m)`` pair; negative m gives the
            same value as |m|.
        L: spheroidal coordinate of the surface, L > 1.

    Returns:
        The eigenvalue, in (0, 1/2).
    """
    mode = ModeIndex.of(mode)
    n, m = mode.n, abs(mode.m)
    L = float(L)
    if not L > 1.0 or math.isinf(L):
        raise DomainError('L must be finite and > 1, got %r' % (L,))
    if L - 1.0 < NEAR_SINGULAR_GAP:
        warnings.warn('L - 1 = %.3g: lambda_{%d,%d} is within O((L-1)|log(L-1)|) of its limit'
                      % (L - 1.0, m, n), NearSingularWarning, stacklevel=2)
    d = legendre_pq_scaled_derivative(n, m, L)
    return -0.5 * d / special.poch(n - m + 1, 2 * m)


def half_property_defect(n, L):
    """sum_{m=-n}^{n} lambda_{m,n}(L) - 1/2, which vanishes for every n."""
    mode = ModeIndex(int(n), 0)
    values = [eigenvalue(mode, L)]
    values += [2.0 * eigenvalue((mode.n, m), L) for m in range(1, mode.n + 1)]
    return math.fsum(values) - 0.5


def attainable_range(mode):
    """(low, high, high_closed) of lambda_{m,n} over L in (1, infinity)."""
    mode = ModeIndex.of(mode)
    s = sphere_eigenvalue(mode.n)
    if mode.m == 0:
        return s, 0.5, False
    return 0.0, s, True


def tune_L(mode, target, tol=TUNE_TOLERANCE):
    """Find L* with |lambda_{m,n}(L*) - target| < tol.

    The map L -> lambda_{m,n}(L) is continuous but not known to be monotone,
    so a log-spaced scan over L - 1 in [1e-6, 1e5] looks for a sign change
    which is then refined with Brent's method in log(L - 1). Only *a*
    solution is guaranteed.

    Raises:
        RangeError: ``target`` is outside the attainable interval of the mode.
        DomainError: the root finder failed inside a bracket.
    """
    mode = ModeIndex.of(mode)
    target = float(target)
    low, high, high_closed = attainable_range(mode)
    inside = low < target < high or (high_closed and target == high)
    if not inside:
        raise RangeError('target %r outside the attainable interval %s%r, %r%s of lambda_{%d,%d}'
                         % (target, '(', low, high, ']' if high_closed else ')', abs(mode.m), mode.n))

    def defect(log_gap):
        return eigenvalue(mode, 1.0 + math.exp(log_gap)) - target

    lo, hi = (math.log(10.0) * e for e in SCAN_LOG_RANGE)
    count = int(SAMPLES_PER_DECADE * (SCAN_LOG_RANGE[1] - SCAN_LOG_RANGE[0])) + 1
    samples = np.linspace(lo, hi, count)
    values = [defect(s) for s in samples]
    for s, v in zip(samples, values):
        if abs(v) < tol:
            logger.debug('tune_L %s: sample L=%r already within %g', mode, 1.0 + math.exp(s), tol)
            return 1.0 + math.exp(s)
    for i in range(count - 1):
        if values[i] * values[i + 1] < 0:
            try:
                log_gap = optimize.brentq(defect, samples[i], samples[i + 1], xtol=1e-14, rtol=BRENT_RTOL,
                                          maxiter=200)
            except (ValueError, RuntimeError) as e:
                raise DomainError('tuning lambda_{%d,%d} to %r failed for L - 1 in [%.6g, %.6g]: %s'
                                  % (abs(mode.m), mode.n, target, math.exp(samples[i]),
                                     math.exp(samples[i + 1]), e)) from e
            L = 1.0 + math.exp(log_gap)
            logger.debug('tune_L %s -> L=%r (bracket %d of %d)', mode, L, i, count - 1)
            return L
    raise RangeError('no sign change of lambda_{%d,%d}(L) - %r for L - 1 in [1e%g, 1e%g]'
                     % (abs(mode.m), mode.n, target, SCAN_LOG_RANGE[0], SCAN_LOG_RANGE[1]))


def enumerate_spectrum(L, n_max):
    """All lambda_{m,n}(L) for 1 <= n <= n_max, 0 <= m <= n, sorted descending.

    Modes with m > 0 carry multiplicity 2 (the +m and -m pair).
    """
    if int(n_max) != n_max or not 1 <= n_max <= MAX_DEGREE:
        raise DomainError('n_max must be an integer in [1, %d], got %r' % (MAX_DEGREE, n_max))
    shape = ProlateShape.from_L(L)
    entries = [EigenvalueEntry(ModeIndex(n, m), shape, eigenvalue((n, m), shape.L))
               for n in range(1, int(n_max) + 1) for m in range(n + 1)]
    entries.sort(key=lambda e: (-e.value, e.mode.n, e.mode.m))
    values = [SpectralValue(e.value, 0.0, str(e.mode), 1 if e.mode.m == 0 else 2) for e in entries]
    return SpectrumResult(values=values, geometry=SpheroidGeometry('prolate', R=shape.R, L=shape.L),
                          scheme='analytic', metadata={'n_max': int(n_max)})
