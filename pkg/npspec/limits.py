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

"""Limit operators of thin domains and their Fourier symbols.

Long prolate spheroids tend to convolution with L_0 on the axis, whose symbol
L0hat decreases from 1/2 to 0; two flat sheets at distance 2 tend to the
block operator with symbol +-(1/2) exp(-4 pi |xi|). Fourier transforms use
fhat(xi) = int f(x) exp(-2 pi i x xi) dx.
"""

import logging
import math
import warnings

import numpy as np
from scipy import integrate, optimize

from npspec.errors import DomainError, NearSingularWarning, SingularKernelError
from npspec.kernels import (QUAD_EPSABS, QUAD_LIMIT, elliptic_reduced_kernel, theta_reduced_kernel, l0_parts,
                            poisson_symbol)
from npspec.quadrature import graded_rule
from npspec.specfun import BRENT_RTOL, khat

logger = logging.getLogger(__name__)

XI0_CAP = 1e4
THETA_PANEL_POINTS = 16
PARITIES = ('even', 'odd')


def l0_kernel(t, method='quad', epsabs=QUAD_EPSABS, limit=QUAD_LIMIT):
    """L_0(t) = (1/2pi) int_0^pi (1 - cos th) / (2 - 2 cos th + t^2)^(3/2) dth.

    Logarithmic at t = 0, ~ 1/(2|t|^3) for large |t|.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t == 0):
        raise SingularKernelError('L_0 has a logarithmic singularity at t = 0')
    delta2, b, n0 = l0_parts(t)
    if method == 'elliptic':
        value = elliptic_reduced_kernel(delta2, b, n0)
    elif method == 'quad':
        value = np.vectorize(lambda d: theta_reduced_kernel(d, 4.0, 0.0, epsabs, limit))(delta2)
    else:
        raise DomainError("method must be 'quad' or 'elliptic', got %r" % (method,))
    return float(value) if np.ndim(value) == 0 else value


def _theta_rule(xi_max, order):
    return graded_rule(0.0, math.pi, 1e-3 / (1.0 + xi_max), order)


def l0_hat(xi, order=THETA_PANEL_POINTS):
    """Symbol of L_0: (1/4pi) int_0^pi khat(2 sin(th/2) xi) dth."""
    xi = np.abs(np.asarray(xi, dtype=float))
    theta, weights = _theta_rule(float(np.max(xi)) if xi.size else 0.0, order)
    chord = 2.0 * np.sin(0.5 * theta)
    value = khat(xi[..., None] * chord) @ weights / (4.0 * math.pi)
    return float(value) if np.ndim(value) == 0 else value


def l0_hat_direct(xi, epsabs=1e-12, limit=QUAD_LIMIT):
    """2 int_0^inf cos(2 pi xi t) L_0(t) dt by QUADPACK, independent of khat."""
    xi = abs(float(xi))
    omega = 2.0 * math.pi * xi

    def kernel(t):
        return float(elliptic_reduced_kernel(*l0_parts(t)))

    near, _ = integrate.quad(lambda t: kernel(t) * math.cos(omega * t), 0.0, 1.0, epsabs=epsabs, limit=limit)
    if xi == 0.0:
        far, _ = integrate.quad(kernel, 1.0, np.inf, epsabs=epsabs, limit=limit)
    else:
        far, _ = integrate.quad(kernel, 1.0, np.inf, weight='cos', wvar=omega, epsabs=epsabs, limlst=100)
    return 2.0 * (near + far)


def _check_lambda(lam):
    lam = float(lam)
    if not 0.0 < lam <= 0.5:
        raise DomainError('lambda must lie in (0, 1/2], got %r' % (lam,))
    return lam


def solve_xi0_prolate(lam, cap=XI0_CAP, tol=1e-10, full_output=False):
    """xi_0 >= 0 with L0hat(xi_0) = lambda.

    The symbol decays like 1/(8 pi xi), so small lambda push xi_0 past ``cap``;
    the cap is then returned and flagged (second item with ``full_output``).
    """
    lam = _check_lambda(lam)
    if lam == 0.5:
        return (0.0, False) if full_output else 0.0
    if l0_hat(cap) > lam:
        message = 'lambda = %g is not reached below xi = %g; returning the cap' % (lam, cap)
        logger.warning(message)
        warnings.warn(message, NearSingularWarning, stacklevel=2)
        return (float(cap), True) if full_output else float(cap)
    high = 1.0
    while l0_hat(high) > lam:
        high = min(2.0 * high, cap)
    try:
        xi0 = optimize.brentq(lambda x: l0_hat(x) - lam, 0.0, high, xtol=1e-14, rtol=BRENT_RTOL, maxiter=200)
    except (ValueError, RuntimeError) as e:
        raise DomainError('solving L0hat(xi) = %g on [0, %g] failed: %s' % (lam, high, e)) from e
    if abs(l0_hat(xi0) - lam) >= tol:
        logger.warning('xi_0 residual %.3g above %.3g for lambda = %g', abs(l0_hat(xi0) - lam), tol, lam)
    logger.debug('solve_xi0_prolate(%g) -> %r', lam, xi0)
    return (xi0, False) if full_output else xi0


def solve_xi0_flat(lam):
    """|xi_0| with (1/2) exp(-4 pi |xi_0|) = lambda; the direction is the first axis."""
    lam = _check_lambda(lam)
    return -math.log(2.0 * lam) / (4.0 * math.pi)


def _planar_magnitude(xi, radial=False):
    xi = np.asarray(xi, dtype=float)
    if radial or xi.ndim == 0:
        return np.abs(xi)
    if xi.shape[-1] != 2:
        raise DomainError('planar frequencies need a trailing axis of length 2, got shape %r' % (xi.shape,))
    return np.hypot(xi[..., 0], xi[..., 1])


def poisson_kernel(t, x):
    """P_t(x) = (1/2pi) t / (|x|^2 + t^2)^(3/2) for planar points x."""
    t = float(t)
    if not t > 0:
        raise DomainError('Poisson height must be positive, got %r' % (t,))
    r = _planar_magnitude(x)
    value = t / (2.0 * math.pi * (r * r + t * t) ** 1.5)
    return float(value) if np.ndim(value) == 0 else value


def poisson_hat(t, xi, radial=False):
    """Fourier transform exp(-2 pi t |xi|) of P_t.

    ``xi`` holds planar frequencies (trailing axis of 2), or magnitudes |xi|
    of any shape when ``radial`` is set.
    """
    t = float(t)
    if not t > 0:
        raise DomainError('Poisson height must be positive, got %r' % (t,))
    value = poisson_symbol(_planar_magnitude(xi, radial), t)
    return float(value) if np.ndim(value) == 0 else value


def two_sheet_symbol(xi, parity, radial=False):
    """Symbol +-(1/2) exp(-4 pi |xi|) of the two-sheet limit on even/odd densities.

    ``xi`` is read as in :func:`poisson_hat`.
    """
    if parity not in PARITIES:
        raise DomainError("parity must be 'even' or 'odd', got %r" % (parity,))
    value = 0.5 * poisson_symbol(_planar_magnitude(xi, radial), 2.0)
    value = value if parity == 'even' else -value
    return float(value) if np.ndim(value) == 0 else value
