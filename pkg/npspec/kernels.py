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

"""Pointwise NP kernels of prolate, oblate and flat two-sheet domains.

Prolate spheroids are scaled to x1^2 + x2^2 + x3^2 / R^2 = 1 and carry the
axisymmetric kernel H_R(x3, y3). Oblate spheroids are
(x1^2 + x2^2) / (aR)^2 + x3^2 = 1, written as two sheets x3 = +-gamma(x) over
the disk D_R of radius aR. The flat domain is the cylinder R U x [-1, 1] over
the unit disk U.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import fft, integrate, special

from npspec.errors import AliasingError, DomainError, SingularKernelError
from npspec.quadrature import dyadic_edges

logger = logging.getLogger(__name__)

QUAD_EPSABS = 1e-11
QUAD_LIMIT = 200
FOUR_PI = 4.0 * math.pi


def _scalar_or_array(value):
    value = np.asarray(value)
    return float(value) if value.ndim == 0 else value


def _breakpoints(scale, upper):
    """Dyadic breakpoints scale, 2 scale, ... below ``upper``."""
    if not scale > 0 or scale >= upper:
        return None
    return list(dyadic_edges(0.0, upper, scale)[1:-1])


# -- prolate ---------------------------------------------------------------

@dataclass(frozen=True)
class ProlateProfile:
    """Meridian profile eta(t) = sqrt(1 - t^2/R^2) of the scaled prolate spheroid."""
    R: float

    def __post_init__(self):
        if not self.R >= 1.0 or math.isinf(self.R):
            raise DomainError('prolate aspect ratio must be finite and >= 1, got %r' % (self.R,))

    def check(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(~(np.abs(t) < self.R)):
            raise DomainError('axial coordinate must satisfy |t| < R = %r' % (self.R,))
        return t

    def eta(self, t):
        t = self.check(t) / self.R
        return _scalar_or_array(np.sqrt((1.0 - t) * (1.0 + t)))

    def measure(self, t):
        t = self.check(t)
        u = t / self.R
        return _scalar_or_array(np.sqrt((1.0 - u) * (1.0 + u) + (u / self.R) ** 2))


def prolate_measure(R, t):
    """Surface density (1 - t^2/R^2 + t^2/R^4)^(1/2) with respect to dphi dt."""
    return ProlateProfile(float(R)).measure(t)


def _axisymmetric_parts(R, x, y):
    """delta^2, 4 eta_x eta_y and the numerator constant N0 of H_R.

    N0 = 1 - xy/R^2 - eta_x eta_y and eta_x - eta_y are both computed in
    cancellation-free form so that the kernel stays accurate for x ~ y.
    """
    t = x - y
    eta_x = np.sqrt((1.0 - x / R) * (1.0 + x / R))
    eta_y = np.sqrt((1.0 - y / R) * (1.0 + y / R))
    q = (x + y) / (R * R * (eta_x + eta_y))
    d1 = 1.0 - x * y / (R * R) + eta_x * eta_y
    delta2 = t * t * (1.0 + q * q)
    return delta2, 4.0 * eta_x * eta_y, t * t / (R * R * d1)


def elliptic_reduced_kernel(delta2, b, n0):
    """(1/2pi) int_0^pi [N0 + b/2 sin^2(th/2)] / [delta^2 + b sin^2(th/2)]^(3/2) dth."""
    m = delta2 + b
    k2 = b / m
    p = delta2 / m
    with np.errstate(divide='ignore', invalid='ignore'):
        nu = np.where(delta2 > 0, n0 / np.where(delta2 > 0, delta2, 1.0), 0.0)
    return (k2 / 6.0 * special.elliprd(0.0, p, 1.0) + nu * special.ellipe(k2)) / (math.pi * np.sqrt(m))


def theta_reduced_kernel(delta2, b, n0, epsabs, limit):
    def integrand(theta):
        s2 = math.sin(0.5 * theta) ** 2
        return (n0 + 0.5 * b * s2) / (delta2 + b * s2) ** 1.5

    points = _breakpoints(2.0 * math.sqrt(delta2 / b), math.pi)
    value, _ = integrate.quad(integrand, 0.0, math.pi, points=points, epsabs=epsabs, epsrel=0.0, limit=limit)
    return value / (2.0 * math.pi)


def h_kernel(R, x3, y3, method='quad', epsabs=QUAD_EPSABS, limit=QUAD_LIMIT):
    """Reduced prolate kernel H_R(x3, y3).

    ``method='quad'`` integrates the defining theta integral adaptively in the
    half-angle form; ``method='elliptic'`` uses the equivalent closed form in
    Carlson's R_D and the complete elliptic integral E, and accepts arrays.
    """
    profile = ProlateProfile(float(R))
    x = profile.check(x3)
    y = profile.check(y3)
    if np.any(x == y):
        raise SingularKernelError('H_R has a logarithmic singularity on the diagonal x3 = y3')
    delta2, b, n0 = _axisymmetric_parts(profile.R, x, y)
    if method == 'elliptic':
        return _scalar_or_array(elliptic_reduced_kernel(delta2, b, n0))
    if method != 'quad':
        raise DomainError("method must be 'quad' or 'elliptic', got %r" % (method,))
    if np.ndim(delta2):
        return np.vectorize(lambda d, bb, n: theta_reduced_kernel(d, bb, n, epsabs, limit))(delta2, b, n0)
    return theta_reduced_kernel(float(delta2), float(b), float(n0), epsabs, limit)


def h_kernel_matrix(R, targets, sources):
    """H_R(targets[i], sources[j]) by the elliptic form; coincident pairs give nan."""
    x = np.asarray(targets, dtype=float)[:, None]
    y = np.asarray(sources, dtype=float)[None, :]
    delta2, b, n0 = _axisymmetric_parts(float(R), x, y)
    with np.errstate(divide='ignore', invalid='ignore'):
        value = elliptic_reduced_kernel(delta2, b, n0)
    return np.where(x == y, np.nan, value)


def h_log_coefficient(R, x3):
    """c(x3) with H_R(x3, y3) = -c(x3) log|x3 - y3| + O(1) as y3 -> x3."""
    return _scalar_or_array(1.0 / (FOUR_PI * np.asarray(ProlateProfile(float(R)).eta(x3))))


def h_row_integral(R, x3, epsabs=QUAD_EPSABS, limit=QUAD_LIMIT):
    """int_{-R}^{R} H_R(x3, y3) dy3, equal to 1/2 (the operator maps 1 to 1/2)."""
    R = float(R)
    x3 = float(ProlateProfile(R).check(x3))

    def integrand(y):
        return float(elliptic_reduced_kernel(*_axisymmetric_parts(R, x3, y)))

    left, _ = integrate.quad(integrand, -R, x3, epsabs=epsabs, limit=limit)
    right, _ = integrate.quad(integrand, x3, R, epsabs=epsabs, limit=limit)
    return left + right


def l0_parts(t):
    """delta^2, b and N0 of the limit kernel L_0 (eta = 1, no curvature term)."""
    t = np.asarray(t, dtype=float)
    return t * t, np.full(t.shape, 4.0), np.zeros(t.shape)


# -- oblate ----------------------------------------------------------------

@dataclass(frozen=True)
class OblateSpheroid:
    """(x1^2 + x2^2)/(aR)^2 + x3^2 = 1, the two sheets x3 = +-gamma(x) over D_R."""
    R: float
    a: float = 1.0

    def __post_init__(self):
        if not (self.R > 0 and self.a > 0) or math.isinf(self.R * self.a):
            raise DomainError('oblate parameters must be positive and finite, got R=%r, a=%r' % (self.R, self.a))

    @property
    def radius(self):
        return self.a * self.R

    def gamma_squared(self, x):
        x = np.asarray(x, dtype=float)
        r2 = np.sum(x * x, axis=-1)
        g2 = 1.0 - r2 / self.radius ** 2
        if np.any(g2 < 0):
            raise DomainError('point outside the disk D_R of radius aR = %r' % (self.radius,))
        return g2

    def gamma(self, x):
        return _scalar_or_array(np.sqrt(self.gamma_squared(x)))

    def omega(self, x):
        """Surface density dS = omega(x) dx of either sheet."""
        x = np.asarray(x, dtype=float)
        g2 = self.gamma_squared(x)
        if np.any(g2 == 0):
            raise SingularKernelError('omega_R is infinite on the rim |x| = aR')
        r2 = np.sum(x * x, axis=-1)
        return _scalar_or_array(np.sqrt(r2 / self.radius ** 4 + g2) / np.sqrt(g2))


def _sheet_kernel(R, a, x, y, cross):
    body = OblateSpheroid(float(R), float(a))
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    gx2 = body.gamma_squared(x)
    gy2 = body.gamma_squared(y)
    if np.any(gy2 == 0):
        raise SingularKernelError('K_R^j needs gamma(y) > 0; the source lies on the rim')
    gx, gy = np.sqrt(gx2), np.sqrt(gy2)
    diff = x - y
    dist2 = np.sum(diff * diff, axis=-1)
    slope = np.sum(diff * y, axis=-1) / (body.radius ** 2 * gy)
    if cross:
        height = gx + gy
        numerator = slope - height
    else:
        if np.any(dist2 == 0):
            raise SingularKernelError('K_R^1 is singular on the diagonal x = y')
        # gamma(x) - gamma(y) without cancellation
        height = np.sum((y - x) * (y + x), axis=-1) / (body.radius ** 2 * (gx + gy))
        numerator = slope + height
    return _scalar_or_array(-numerator / (FOUR_PI * (dist2 + height * height) ** 1.5))


def oblate_k1(R, a, x, y):
    """Same-sheet kernel K_R^1(x, y) of the oblate spheroid, a_1 = a_2 = a."""
    return _sheet_kernel(R, a, x, y, cross=False)


def oblate_k2(R, a, x, y):
    """Cross-sheet kernel K_R^2(x, y) of the oblate spheroid, a_1 = a_2 = a."""
    return _sheet_kernel(R, a, x, y, cross=True)


def omega_weight(R, a, x):
    return OblateSpheroid(float(R), float(a)).omega(x)


def omega_norm(f, weights, R, a, points):
    """||f||_{omega_R} from samples ``f`` at ``points`` with planar weights."""
    density = np.asarray(omega_weight(R, a, points))
    f = np.asarray(f)
    return math.sqrt(float(np.sum(np.asarray(weights) * np.abs(f) ** 2 * density)))


def omega_mass(R, a, region='A', epsabs=QUAD_EPSABS):
    """omega_R(U) for U = A_R (omega ~ 1 zone), B_R (rim annulus) or D (whole disk).

    A_R = {|x|^2/(aR)^4 <= gamma(x)^2} is the disk |x| <= aR sin(arctan(aR)); in the
    meridian angle |x| = aR sin(psi) the density omega r dr becomes smooth.
    """
    radius = OblateSpheroid(float(R), float(a)).radius
    split = math.atan(radius)
    bounds = {'A': (0.0, split), 'B': (split, 0.5 * math.pi), 'D': (0.0, 0.5 * math.pi)}
    if region not in bounds:
        raise DomainError("region must be 'A', 'B' or 'D', got %r" % (region,))

    def integrand(psi):
        s, c = math.sin(psi), math.cos(psi)
        return s * math.sqrt((s / radius) ** 2 + c * c)

    value, _ = integrate.quad(integrand, *bounds[region], epsabs=epsabs, limit=QUAD_LIMIT)
    return 2.0 * math.pi * radius ** 2 * value


def oblate_radial_kernel(R, a, m, j, r, s, epsabs=QUAD_EPSABS, limit=QUAD_LIMIT):
    """Azimuthal mode-m reduction s int_0^{2pi} K_R^j((r, 0), s e^{i alpha}) e^{i m alpha} d alpha.

    The kernels depend on alpha through cos(alpha) only, so the reduction is real.

    One adaptive quadrature per entry makes this too slow for assembly.
    :func:`npspec.spectra.discretize_oblate` builds its blocks from
    :func:`meridian_mode_kernels` and this entry-wise reduction serves as the
    reference those blocks are checked against.
    """
    if j not in (1, 2):
        raise DomainError('sheet coupling j must be 1 or 2, got %r' % (j,))
    if int(m) != m or m < 0:
        raise DomainError('azimuthal order must be a non-negative integer, got %r' % (m,))
    body = OblateSpheroid(float(R), float(a))
    r, s = float(r), float(s)
    if not (0 <= r < body.radius and 0 <= s < body.radius):
        raise DomainError('radii must lie in [0, aR) = [0, %r)' % (body.radius,))
    if j == 1 and r == s:
        raise SingularKernelError('same-sheet radial kernel is singular at r = s; '
                                  'assemble with spectra.discretize_oblate instead')
    kernel = oblate_k1 if j == 1 else oblate_k2

    def integrand(alpha):
        y = (s * math.cos(alpha), s * math.sin(alpha))
        return kernel(R, a, (r, 0.0), y) * math.cos(m * alpha)

    scale = abs(r - s) / math.sqrt(max(r * s, 1e-300)) if j == 1 else 0.0
    points = _breakpoints(scale, math.pi)
    value, _ = integrate.quad(integrand, 0.0, math.pi, points=points, epsabs=epsabs, epsrel=0.0, limit=limit)
    return 2.0 * s * value


def meridian_mode_kernels(radius, psi_targets, psi_sources, alpha, alpha_weights, m_max):
    """int_0^{2pi} K cos(m alpha) d alpha on the meridian psi, for m = 0..m_max.

    The surface is parametrised as (aR sin psi e^{i phi}, cos psi), psi in (0, pi);
    the result is the kernel with respect to d psi' and has shape
    (m_max + 1, len(psi_targets), len(psi_sources)). Coincident pairs give nan.
    """
    pt = np.asarray(psi_targets, dtype=float)[:, None, None]
    ps = np.asarray(psi_sources, dtype=float)[None, :, None]
    half = np.sin(0.5 * np.asarray(alpha, dtype=float))[None, None, :]
    sin_mid = np.sin(0.5 * (pt + ps))
    cos_mid = np.cos(0.5 * (pt + ps))
    sin_gap = np.sin(0.5 * (ps - pt))
    r = radius * np.sin(pt)
    s = radius * np.sin(ps)
    ds = 2.0 * radius * cos_mid * sin_gap
    dz = -2.0 * sin_mid * sin_gap
    dist2 = ds * ds + dz * dz + 4.0 * r * s * half * half
    numerator = s * (np.sin(ps) * (ds + 2.0 * r * half * half) + radius * np.cos(ps) * dz)
    with np.errstate(divide='ignore', invalid='ignore'):
        values = numerator / (FOUR_PI * dist2 ** 1.5)
    cos_table = np.cos(np.outer(alpha, np.arange(m_max + 1))) * (2.0 * np.asarray(alpha_weights))[:, None]
    modes = np.moveaxis(values @ cos_table, -1, 0)
    modes[:, pt[:, :, 0] == ps[:, :, 0]] = np.nan
    return modes


def meridian_diagonal_defect(radius, m):
    """int_0^{2pi} K (1 - cos m alpha) d alpha at coincident meridian points."""
    return sum(1.0 / (2 * k - 1) for k in range(1, m + 1)) / (2.0 * math.pi * radius)


def meridian_log_coefficient(radius):
    """The m = 0 meridian kernel behaves like -log|psi - psi'| / (4 pi aR)."""
    return 1.0 / (FOUR_PI * radius)


# -- flat two-sheet domain --------------------------------------------------

@dataclass(frozen=True)
class FlatDomain:
    """Sheets R U x {+1, -1} over the unit disk U, closed by the cylinder |x| = R."""
    R: float
    base_radius: float = 1.0

    def __post_init__(self):
        if not self.R > 0 or math.isinf(self.R):
            raise DomainError('flat domain scale must be positive and finite, got %r' % (self.R,))

    @property
    def radius(self):
        return self.R * self.base_radius


def poisson_symbol(xi, height=2.0):
    """Fourier multiplier exp(-2 pi t |xi|) of the Poisson kernel P_t."""
    return np.exp(-2.0 * math.pi * height * np.abs(xi))


def _edge_ring(a):
    return np.concatenate([a[0], a[-1], a[1:-1, 0], a[1:-1, -1]])


def check_decay(f, edge_tol, name='density'):
    f = np.asarray(f)
    peak = float(np.max(np.abs(f))) if f.size else 0.0
    if peak == 0.0:
        return
    edge = float(np.max(np.abs(_edge_ring(f))))
    if edge > edge_tol * peak:
        raise AliasingError('%s does not decay before the grid edge (edge/peak = %.3g > %.3g); '
                            'enlarge the grid' % (name, edge / peak, edge_tol))


def planar_frequencies(shape, spacing):
    k1 = fft.fftfreq(shape[0], d=spacing)
    k2 = fft.fftfreq(shape[1], d=spacing)
    return np.hypot(k1[:, None], k2[None, :])


def flat_sheet_apply(phi_plus, phi_minus, spacing, pad=2, edge_tol=1e-8):
    """Sheet values of the flat NP operator for densities on the two sheets.

    On the sheets away from the side wall the operator is (1/2) P_2 * phi, each
    sheet seeing the *opposite* one: upper = (1/2) P_2 * phi^-, lower =
    (1/2) P_2 * phi^+. Convolutions are done with the exact symbol on a
    zero-padded FFT grid.
    """
    phi_plus = np.asarray(phi_plus)
    phi_minus = np.asarray(phi_minus)
    if phi_plus.shape != phi_minus.shape or phi_plus.ndim != 2:
        raise DomainError('sheet densities must be 2-D arrays of equal shape')
    check_decay(phi_plus, edge_tol, 'phi_plus')
    check_decay(phi_minus, edge_tol, 'phi_minus')
    shape = tuple(pad * n for n in phi_plus.shape)
    multiplier = 0.5 * poisson_symbol(planar_frequencies(shape, spacing))
    n1, n2 = phi_plus.shape

    def convolve(phi):
        value = fft.ifft2(fft.fft2(phi, s=shape) * multiplier)[:n1, :n2]
        return value if np.iscomplexobj(phi) else value.real

    return convolve(phi_minus), convolve(phi_plus)


def flat_wall_potential(phi_plus, phi_minus, sources, weights, targets, chunk=4096):
    """Double layer of sheet densities evaluated at arbitrary points X = (x, x3).

    ``sources`` are planar points (M, 2) carrying ``phi_plus`` on x3 = +1 and
    ``phi_minus`` on x3 = -1 with quadrature ``weights``.
    """
    sources = np.asarray(sources, dtype=float)
    targets = np.atleast_2d(np.asarray(targets, dtype=float))
    wp = np.asarray(weights) * np.asarray(phi_plus)
    wm = np.asarray(weights) * np.asarray(phi_minus)
    out = np.empty(targets.shape[0], dtype=np.result_type(wp, wm, float))
    for start in range(0, targets.shape[0], chunk):
        block = targets[start:start + chunk]
        d2 = ((block[:, None, :2] - sources[None, :, :]) ** 2).sum(axis=-1)
        up = block[:, 2:3] - 1.0
        down = block[:, 2:3] + 1.0
        # a sheet does not see itself: the height factor vanishes in its own plane
        with np.errstate(divide='ignore', invalid='ignore'):
            upper = np.where(up == 0, 0.0, up / (d2 + up * up) ** 1.5)
            lower = np.where(down == 0, 0.0, down / (d2 + down * down) ** 1.5)
        out[start:start + chunk] = (lower @ wm - upper @ wp) / FOUR_PI
    return out
