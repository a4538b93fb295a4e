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

"""Special functions on the real ray z > 1.

Associated Legendre functions follow Hobson's convention for z > 1::

    P_n^m(z) = (z^2 - 1)^(m/2) d^m P_n / dz^m
    Q_n^m(z) = (z^2 - 1)^(m/2) d^m Q_n / dz^m,  Q_0(z) = log((z + 1)/(z - 1)) / 2

so that (-1)^m Q_n^m > 0. Internally both kinds are carried in the scaled
variables (u = sqrt(z^2 - 1))::

    Phat_k = P_k^m z^(m - k) / u^m,    Qhat_k = (-1)^m Q_k^m z^(k + 1 - m) u^m

which stay O(1) on the whole ray, so products and the eigenvalue formula never
overflow even where the individual functions do.
"""

import logging
import math
import warnings

import numpy as np
from scipy import special

from npspec.errors import DomainError, LegendreOverflowError, NearSingularWarning

logger = logging.getLogger(__name__)

NEAR_SINGULAR_GAP = 1e-8
MILLER_DIGITS = 20.0
_RESCALE = 1e200
# smallest relative tolerance scipy.optimize.brentq accepts
BRENT_RTOL = 4 * np.finfo(float).eps


def _check_mode(n, m):
    if int(n) != n or int(m) != m:
        raise DomainError('degree and order must be integers, got n=%r, m=%r' % (n, m))
    n, m = int(n), int(m)
    if n < 0 or m < 0 or m > n:
        raise DomainError('need 0 <= m <= n, got n=%d, m=%d' % (n, m))
    return n, m


def _check_ray(z):
    z = float(z)
    if not z > 1.0 or math.isinf(z):
        raise DomainError('Legendre argument must be finite and > 1, got %r' % (z,))
    return z


def _arccosh(z):
    zm1 = z - 1.0
    return math.log1p(zm1 + math.sqrt(zm1 * (z + 1.0)))


def _scaled_p(n, m, z):
    """(Phat_{n-1}, Phat_n) by forward recurrence in the degree."""
    prev, cur = 0.0, float(math.prod(range(1, 2 * m, 2)))
    inv_z2 = 1.0 / (z * z)
    for k in range(m, n):
        prev, cur = cur, ((2 * k + 1) * cur - (k + m) * prev * inv_z2) / (k - m + 1)
    return prev, cur


def _scaled_q0(kmax, z):
    """Qhat_0..Qhat_kmax at order zero."""
    q0 = 0.5 * math.log1p(2.0 / (z - 1.0))
    mu = _arccosh(z)
    qhat = np.empty(kmax + 1)
    qhat[0] = z * q0
    if kmax == 0:
        return qhat

    if 2.0 * kmax * mu <= 1.0:
        # close to z = 1 both solutions grow alike and forward recurrence is safe
        z2 = z * z
        qhat[1] = z2 * (z * q0 - 1.0)
        for k in range(1, kmax):
            qhat[k + 1] = z2 * ((2 * k + 1) * qhat[k] - k * qhat[k - 1]) / (k + 1)
        return qhat

    # Miller: Q is the minimal solution, run the recurrence downward and normalise
    start = kmax + int(math.ceil(MILLER_DIGITS / mu)) + 10
    inv_z2 = 1.0 / (z * z)
    trial = np.zeros(start + 2)
    trial[start] = 1.0
    for k in range(start, 0, -1):
        trial[k - 1] = ((2 * k + 1) * trial[k] - (k + 1) * trial[k + 1] * inv_z2) / k
        if abs(trial[k - 1]) > _RESCALE:
            trial[k - 1:] /= _RESCALE
    logger.debug('Miller recurrence from k=%d for kmax=%d, z=%g', start, kmax, z)
    return trial[:kmax + 1] * (qhat[0] / trial[0])


def _scaled_q(n, m, z):
    """(Qhat_n, Qhat_{n+1}) at order m, raising the order from m = 0."""
    q = _scaled_q0(n + 1, z)
    k = np.arange(1, n + 2)
    for j in range(m):
        raised = np.empty_like(q)
        raised[0] = np.nan
        raised[1:] = (k + j) * q[:-1] - (k - j) * q[1:]
        q = raised
    return q[n], q[n + 1]


def _scaled_product_derivative(n, m, z):
    """(z^2 - 1) d/dz [P_n^m (-1)^m Q_n^m] in scaled variables."""
    p_prev, p_n = _scaled_p(n, m, z)
    q_n, q_next = _scaled_q(n, m, z)
    return -p_n * q_n + ((n - m + 1) * p_n * q_next - (n + m) * p_prev * q_n) / (z * z)


def _unscale(value, log_factor, name, n, m, z):
    if value == 0.0:
        return 0.0
    magnitude = math.log(abs(value)) + log_factor
    if magnitude > 709.0:
        raise LegendreOverflowError(
            '%s_%d^%d(%r) overflows a double; the eigenvalue formula only needs the product, '
            'use legendre_pq_product_derivative or prolate.eigenvalue instead' % (name, n, m, z))
    return math.copysign(math.exp(magnitude), value)


def legendre_p(n, m, z):
    """Associated Legendre function of the first kind P_n^m(z), z > 1.

    Args:
        n: degree, n >= 0.
        m: order, 0 <= m <= n.
        z: real argument, z > 1.

    Returns:
        P_n^m(z) in Hobson's convention (no Condon-Shortley phase).
    """
    n, m = _check_mode(n, m)
    z = _check_ray(z)
    _, p_n = _scaled_p(n, m, z)
    u2 = (z - 1.0) * (z + 1.0)
    return _unscale(p_n, 0.5 * m * math.log(u2) + (n - m) * math.log(z), 'P', n, m, z)


def legendre_q(n, m, z):
    """Associated Legendre function of the second kind Q_n^m(z), z > 1.

    The branch is log((z + 1)/(z - 1)) on the real ray; (-1)^m Q_n^m(z) > 0.
    """
    n, m = _check_mode(n, m)
    z = _check_ray(z)
    q_n, _ = _scaled_q(n, m, z)
    u2 = (z - 1.0) * (z + 1.0)
    value = _unscale(q_n, (m - n - 1) * math.log(z) - 0.5 * m * math.log(u2), 'Q', n, m, z)
    return -value if m % 2 else value


def legendre_pq_product_derivative(n, m, L):
    """d/dL [P_n^m(L) Q_n^m(L)], from the degree recurrences (no differencing).

    Warns with :class:`NearSingularWarning` when L - 1 < 1e-8, where the
    derivative blows up like 1/(2(1 - L)).
    """
    n, m = _check_mode(n, m)
    L = _check_ray(L)
    if L - 1.0 < NEAR_SINGULAR_GAP:
        warnings.warn('L - 1 = %.3g: (P Q)\' diverges like 1/(2(1 - L))' % (L - 1.0),
                      NearSingularWarning, stacklevel=2)
    d = _scaled_product_derivative(n, m, L)
    value = d / ((L - 1.0) * (L + 1.0))
    return -value if m % 2 else value


def legendre_pq_scaled_derivative(n, m, L):
    """(L^2 - 1) d/dL [P_n^m (-1)^m Q_n^m](L).

    Finite on the whole ray: tends to -1 as L -> 1 for m = 0 and to
    -(n+m)!/(n-m)!/(2n+1) as L -> infinity.
    """
    n, m = _check_mode(n, m)
    L = _check_ray(L)
    return _scaled_product_derivative(n, m, L)


def bessel_k(order, x):
    """Modified Bessel function of the second kind K_0(x) or K_1(x), x > 0."""
    if order not in (0, 1):
        raise DomainError('only orders 0 and 1 are supported, got %r' % (order,))
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError('bessel_k needs x > 0')
    value = special.k0(x) if order == 0 else special.k1(x)
    return float(value) if value.ndim == 0 else value


def khat(xi):
    """Fourier transform of k(t) = (1 + t^2)^(-3/2): 4 pi |xi| K_1(2 pi |xi|), khat(0) = 2."""
    xi = np.asarray(xi, dtype=float)
    x = 2.0 * np.pi * np.abs(xi)
    with np.errstate(invalid='ignore', over='ignore'):
        value = np.where(x > 0, 2.0 * x * special.k1(np.where(x > 0, x, 1.0)), 2.0)
    return float(value) if value.ndim == 0 else value
