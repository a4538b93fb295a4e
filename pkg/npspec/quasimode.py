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

"""Quasi-modes of long prolate, flat oblate and thin flat domains.

For a target lambda the test densities are modulated bumps,

    g_rho(x) = rho^(-1/2) exp(2 pi i xi0 x) (chi zeta)(x / rho)     on the axis,
    f_rho(x) = rho^(-1) exp(2 pi i xi0 x1) (chi zeta)(x / rho)      on the sheets,

with rho = R^(1 - sigma) and xi0 the frequency where the limit symbol takes
the value |lambda|. zeta has a nonnegative bump as Fourier transform and
chi is a smooth cut-off, so the densities are compactly supported and
concentrate in frequency at xi0 as R grows.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import fft, integrate, special

from npspec.errors import BudgetError, DomainError, ResolutionError
from npspec.kernels import (OblateSpheroid, check_decay, flat_sheet_apply, flat_wall_potential, h_kernel_matrix,
                            h_log_coefficient, oblate_k1, oblate_k2, omega_norm, omega_weight, planar_frequencies,
                            poisson_symbol, prolate_measure)
from npspec.limits import XI0_CAP, l0_hat, solve_xi0_flat, solve_xi0_prolate
from npspec.quadrature import composite_gauss_legendre, gauss_legendre, graded_rule, log_product_weights

logger = logging.getLogger(__name__)

FAMILIES = ('prolate', 'oblate', 'flat')
POINTS_PER_PERIOD = 10
PANEL_POINTS = 16
MAX_AXIAL_NODES = 1 << 16
PAIR_BUDGET = 4e9
EVAL_BLOCK = 1 << 21
ZETA_EDGES = (0.0, 0.5, 0.8, 0.95, 1.0)
ZETA_ORDER = 32
ENVELOPE_PANELS = 32
ETA_MAX = 16.0
FAR_ANGLES = 64
TARGET_MARGIN = 4.0
WALL_PATCH = 2.0
# int_C int_C |x - z|^-1 dx dz over the unit square C, halved
SELF_CELL = 2.0 * math.log1p(math.sqrt(2.0)) - 2.0 / 3.0 * (math.sqrt(2.0) - 1.0)


# -- profiles --------------------------------------------------------------

def _bump(t):
    t = np.abs(np.asarray(t, dtype=float))
    out = np.zeros(t.shape)
    inside = t < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - t[inside] ** 2))
    return out


@lru_cache(maxsize=2)
def _bump_mass(dim):
    if dim == 1:
        value, _ = integrate.quad(lambda t: float(_bump(t)), -1.0, 1.0, epsabs=1e-15, epsrel=1e-13)
    else:
        value, _ = integrate.quad(lambda r: 2.0 * math.pi * r * float(_bump(r)), 0.0, 1.0,
                                  epsabs=1e-15, epsrel=1e-13)
    return value


def smooth_step(t):
    """0 for t <= 0, 1 for t >= 1, e^(-1/t) / (e^(-1/t) + e^(-1/(1-t))) between."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide='ignore', over='ignore', invalid='ignore'):
        inner = special.expit(1.0 / (1.0 - t) - 1.0 / t)
    return np.where(t <= 0.0, 0.0, np.where(t >= 1.0, 1.0, inner))


def _radial_transform(r, nodes, weights, dim):
    """sum_k weights_k cos(2 pi r nu_k) (dim 1) or J_0(2 pi r nu_k) (dim 2)."""
    r = np.asarray(r, dtype=float)
    flat = r.ravel()
    out = np.empty(flat.shape)
    step = max(1, EVAL_BLOCK // nodes.size)
    for start in range(0, flat.size, step):
        arg = 2.0 * math.pi * flat[start:start + step, None] * nodes[None, :]
        basis = np.cos(arg) if dim == 1 else special.j0(arg)
        out[start:start + step] = basis @ weights
    return out.reshape(r.shape)


@dataclass(frozen=True)
class ProfilePair:
    """The cut-off chi and the bump-transform profile zeta in dimension 1 or 2.

    Radial functions take |x|; the point-wise methods accept scalars in 1-D
    and arrays with a trailing axis of length 2 in 2-D.
    """
    dim: int = 1

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise DomainError('profiles exist in dimension 1 or 2, got %r' % (self.dim,))

    def magnitude(self, x):
        x = np.asarray(x, dtype=float)
        if self.dim == 1:
            return np.abs(x)
        if x.shape[-1:] != (2,):
            raise DomainError('planar points need a trailing axis of length 2, got shape %r' % (x.shape,))
        return np.hypot(x[..., 0], x[..., 1])

    def zeta_hat_radial(self, nu):
        return _bump(nu) / _bump_mass(self.dim)

    def zeta_radial(self, r):
        nodes, weights = composite_gauss_legendre(ZETA_EDGES, ZETA_ORDER)
        if self.dim == 1:
            weights = 2.0 * weights * self.zeta_hat_radial(nodes)
        else:
            weights = 2.0 * math.pi * weights * nodes * self.zeta_hat_radial(nodes)
        return _radial_transform(r, nodes, weights, self.dim)

    def chi_radial(self, r, radius=1.0):
        return 1.0 - smooth_step(2.0 * np.asarray(r, dtype=float) / radius - 1.0)

    def envelope_radial(self, r, radius=1.0):
        """(chi zeta)(r), evaluating zeta only inside the support."""
        r = np.asarray(r, dtype=float)
        out = np.zeros(r.shape)
        inside = r < radius
        if np.any(inside):
            out[inside] = self.chi_radial(r[inside], radius) * self.zeta_radial(r[inside])
        return out

    def zeta_hat(self, xi):
        return self.zeta_hat_radial(self.magnitude(xi))

    def zeta(self, x):
        return self.zeta_radial(self.magnitude(x))

    def chi(self, x, radius=1.0):
        return self.chi_radial(self.magnitude(x), radius)

    def envelope(self, x, radius=1.0):
        return self.envelope_radial(self.magnitude(x), radius)

    def envelope_hat(self, eta, radius=1.0):
        """Fourier transform of chi zeta (real, even and radial)."""
        edges = np.linspace(0.0, radius, ENVELOPE_PANELS + 1)
        nodes, weights = composite_gauss_legendre(edges, PANEL_POINTS)
        values = self.envelope_radial(nodes, radius)
        if self.dim == 1:
            weights = 2.0 * weights * values
        else:
            weights = 2.0 * math.pi * weights * nodes * values
        return _radial_transform(self.magnitude(eta), nodes, weights, self.dim)

    def envelope_norm(self, radius=1.0):
        """||chi zeta||_2."""
        if self.dim == 1:
            value, _ = integrate.quad(lambda r: 2.0 * float(self.envelope_radial(r, radius)) ** 2, 0.0, radius,
                                      epsabs=1e-14, limit=200)
        else:
            value, _ = integrate.quad(lambda r: 2.0 * math.pi * r * float(self.envelope_radial(r, radius)) ** 2,
                                      0.0, radius, epsabs=1e-14, limit=200)
        return math.sqrt(value)


@lru_cache(maxsize=2)
def build_profiles(dim=1):
    return ProfilePair(dim)


# -- test functions --------------------------------------------------------

@dataclass(frozen=True)
class QuasiModeSpec:
    """Target lambda, width exponent sigma and scale R of one quasi-mode."""
    family: str
    lam: float
    sigma: float
    R: float
    xi0: float
    a: float = 1.0
    base_radius: float = 1.0
    cutoff: float = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError('unknown family %r, expected one of %s' % (self.family, ', '.join(FAMILIES)))
        if not 0.0 < self.sigma < 1.0:
            raise DomainError('sigma must lie in (0, 1), got %r' % (self.sigma,))
        if not self.R > 1.0 or math.isinf(self.R):
            raise DomainError('R must be finite and > 1 so that rho = R^(1 - sigma) < R, got %r' % (self.R,))
        if self.lam == 0.0 or abs(self.lam) > 0.5:
            raise DomainError('lambda must lie in [-1/2, 0) or (0, 1/2], got %r' % (self.lam,))
        if self.family == 'prolate' and self.lam < 0:
            raise DomainError('prolate spectra are positive; lambda must lie in (0, 1/2], got %r' % (self.lam,))
        if not (self.a > 0 and self.base_radius > 0):
            raise DomainError('a and base_radius must be positive')
        if self.support_radius >= self.domain_radius:
            raise DomainError('support radius %g does not fit inside the domain of radius %g'
                              % (self.support_radius, self.domain_radius))

    @classmethod
    def create(cls, family, lam, sigma, R, a=1.0, base_radius=1.0, cutoff=None, xi0_cap=XI0_CAP):
        lam = float(lam)
        if lam == 0.0 or abs(lam) > 0.5:
            raise DomainError('lambda must lie in [-1/2, 0) or (0, 1/2], got %r' % (lam,))
        if family == 'prolate':
            xi0 = solve_xi0_prolate(lam, cap=xi0_cap)
        else:
            xi0 = solve_xi0_flat(abs(lam))
        return cls(family, lam, float(sigma), float(R), float(xi0), float(a), float(base_radius), cutoff)

    @property
    def rho(self):
        return self.R ** (1.0 - self.sigma)

    @property
    def radius(self):
        """Radius m of the cut-off in units of rho."""
        if self.cutoff is not None:
            return float(self.cutoff)
        return {'prolate': 1.0, 'oblate': self.a, 'flat': 0.5 * self.base_radius}[self.family]

    @property
    def support_radius(self):
        return self.rho * self.radius

    @property
    def domain_radius(self):
        return {'prolate': self.R, 'oblate': self.a * self.R, 'flat': self.base_radius * self.R}[self.family]

    @property
    def parity(self):
        return 'even' if self.lam > 0 else 'odd'

    @property
    def profiles(self):
        return build_profiles(1 if self.family == 'prolate' else 2)


@dataclass
class AxialSamples:
    """Samples of g on a composite Gauss-Legendre grid with panel ``edges``."""
    x: np.ndarray
    weights: np.ndarray
    values: np.ndarray
    edges: np.ndarray

    @property
    def size(self):
        return self.x.size

    def norm(self):
        return math.sqrt(float(np.sum(self.weights * np.abs(self.values) ** 2)))


@dataclass
class PlanarSamples:
    """Samples on the cell centres (k + 1/2) h of a square grid."""
    axis: np.ndarray
    spacing: float
    values: np.ndarray

    @property
    def points(self):
        x1, x2 = np.meshgrid(self.axis, self.axis, indexing='ij')
        return np.stack([x1, x2], axis=-1).reshape(-1, 2)

    def norm(self):
        return self.spacing * math.sqrt(float(np.sum(np.abs(self.values) ** 2)))

    def support(self):
        """Points and values where the samples do not vanish."""
        values = self.values.ravel()
        mask = values != 0
        return self.points[mask], values[mask]


@dataclass
class SheetPair:
    plus: PlanarSamples
    minus: PlanarSamples

    @property
    def sign(self):
        return 1 if np.array_equal(self.plus.values, self.minus.values) else -1


def _modulation(xi0, x):
    if xi0 == 0.0:
        return 1.0
    return np.exp(2j * math.pi * xi0 * x)


def _axial_grid(spec, N=None, points_per_period=POINTS_PER_PERIOD, panel_points=PANEL_POINTS,
                max_nodes=MAX_AXIAL_NODES):
    rho = spec.support_radius
    if N is None:
        width = 1.0
        if spec.xi0 > 0:
            width = min(width, panel_points / (points_per_period * spec.xi0))
        panels = max(2, int(math.ceil(2.0 * rho / width)))
    else:
        panels = max(1, int(N) // panel_points)
    nodes = panels * panel_points
    if nodes > max_nodes:
        raise ResolutionError('g_rho needs %d nodes on (-%g, %g), above the budget of %d'
                              % (nodes, rho, rho, max_nodes))
    spacing = 2.0 * rho / nodes
    if spec.xi0 > 0 and spacing * spec.xi0 * points_per_period > 1.0:
        raise ResolutionError('%d nodes give %.1f points per period 1/xi0 = %g; need %d'
                              % (nodes, 1.0 / (spacing * spec.xi0), 1.0 / spec.xi0, points_per_period))
    edges = np.linspace(-rho, rho, panels + 1)
    x, w = composite_gauss_legendre(edges, panel_points)
    return edges, x, w


def build_g_rho(spec, N=None, points_per_period=POINTS_PER_PERIOD, panel_points=PANEL_POINTS,
                max_nodes=MAX_AXIAL_NODES):
    """g_rho on (-rho, rho) with at least ``points_per_period`` nodes per period of the modulation."""
    if spec.family != 'prolate':
        raise DomainError('g_rho lives on the axis of prolate spheroids, got family %r' % (spec.family,))
    edges, x, w = _axial_grid(spec, N, points_per_period, panel_points, max_nodes)
    envelope = spec.profiles.envelope_radial(np.abs(x) / spec.rho, spec.radius)
    values = spec.rho ** -0.5 * envelope * _modulation(spec.xi0, x)
    return AxialSamples(x, w, values, edges)


def default_spacing(spec):
    h = min(1.0, spec.support_radius / 16.0)
    if spec.xi0 > 0:
        h = min(h, 0.25 / spec.xi0)
    return h


def f_rho_values(spec, points):
    """f_rho at planar points (trailing axis of length 2)."""
    points = np.asarray(points, dtype=float)
    r = np.hypot(points[..., 0], points[..., 1]) / spec.rho
    envelope = spec.profiles.envelope_radial(r, spec.radius)
    return envelope * _modulation(spec.xi0, points[..., 0]) / spec.rho


def build_f_rho(spec, spacing=None, margin_cells=2):
    if spec.family == 'prolate':
        raise DomainError('f_rho lives on the sheets of oblate and flat domains, not on %r' % (spec.family,))
    h = float(spacing) if spacing is not None else default_spacing(spec)
    half = int(math.ceil(spec.support_radius / h)) + int(margin_cells)
    axis = (np.arange(-half, half) + 0.5) * h
    x1, x2 = np.meshgrid(axis, axis, indexing='ij')
    values = f_rho_values(spec, np.stack([x1, x2], axis=-1))
    logger.debug('f_rho on a %dx%d grid, spacing %g', axis.size, axis.size, h)
    return PlanarSamples(axis, h, values)


def build_phi_rho(spec, spacing=None):
    """(phi+, phi-) = (f, f) for lambda > 0 and (f, -f) for lambda < 0."""
    f = build_f_rho(spec, spacing)
    minus = f.values if spec.lam > 0 else -f.values
    return SheetPair(f, PlanarSamples(f.axis, f.spacing, minus))


# -- residuals -------------------------------------------------------------

@dataclass
class ResidualReport:
    family: str
    R: float
    rho: float
    value: float
    parts: dict = field(default_factory=dict)

    def __float__(self):
        return float(self.value)


def _outer_integrals(R, rho, x):
    """int of H_R(x_i, y) over rho < |y| < R."""
    gap = rho - float(np.max(np.abs(x)))
    nodes, weights = graded_rule(rho, R, 0.1 * gap, PANEL_POINTS)
    out = np.empty(x.size)
    step = max(1, EVAL_BLOCK // (2 * nodes.size))
    for start in range(0, x.size, step):
        rows = x[start:start + step]
        out[start:start + step] = (h_kernel_matrix(R, rows, nodes) @ weights
                                   + h_kernel_matrix(R, rows, -nodes) @ weights)
    return out


def _log_correction(R, samples, panel_points):
    """Exact integration of -c(x) log|x - y| (g(y) - g(x)) on the panel of x."""
    x, w, g = samples.x, samples.weights, samples.values
    coeff = h_log_coefficient(R, x)
    out = np.zeros(x.size, dtype=complex)
    for p in range(samples.edges.size - 1):
        cols = slice(p * panel_points, (p + 1) * panel_points)
        t = x[cols]
        W = log_product_weights(t, t, w[cols], samples.edges[p], samples.edges[p + 1])
        gap = np.abs(t[:, None] - t[None, :])
        with np.errstate(divide='ignore'):
            logs = np.where(gap > 0, np.log(gap), 0.0)
        diff = g[None, cols] - g[cols, None]
        out[cols] = -coeff[cols] * np.sum((W - w[cols] * logs) * diff, axis=1)
    return out


def apply_h(R, samples, panel_points=PANEL_POINTS):
    """H_R[g] at the nodes of ``samples``; g vanishes outside the grid."""
    x, w, g = samples.x, samples.weights, samples.values
    out = np.empty(x.size, dtype=complex)
    step = max(1, EVAL_BLOCK // x.size)
    for start in range(0, x.size, step):
        H = h_kernel_matrix(R, x[start:start + step], x) * w
        local = np.arange(H.shape[0])
        H[local, local + start] = 0.0
        out[start:start + step] = H @ g - H.sum(axis=1) * g[start:start + step]
    rho = float(samples.edges[-1])
    out += (0.5 - _outer_integrals(R, rho, x)) * g
    out += _log_correction(R, samples, panel_points)
    return out


def residual_prolate(spec, N=None, points_per_period=POINTS_PER_PERIOD, panel_points=PANEL_POINTS,
                     max_nodes=MAX_AXIAL_NODES):
    """||lambda g_rho - H_R g_rho|| / ||g_rho|| with the prolate surface weight over supp g_rho."""
    start = time.time()
    samples = build_g_rho(spec, N, points_per_period, panel_points, max_nodes)
    residual = spec.lam * samples.values - apply_h(spec.R, samples, panel_points)
    weights = 2.0 * math.pi * prolate_measure(spec.R, samples.x) * samples.weights
    norm = math.sqrt(float(np.sum(weights * np.abs(samples.values) ** 2)))
    value = math.sqrt(float(np.sum(weights * np.abs(residual) ** 2))) / norm
    limit = limit_residual_prolate(spec.lam, spec.rho)
    logger.info('prolate residual R=%g rho=%g: %.4g (limit operator %.4g, %d nodes, %.1f s)',
                spec.R, spec.rho, value, limit, samples.size, time.time() - start)
    return ResidualReport('prolate', spec.R, spec.rho, value,
                          {'limit': limit, 'norm': norm, 'nodes': samples.size, 'xi0': spec.xi0})


def limit_residual_prolate(lam, rho, eta_max=ETA_MAX):
    """||lambda g_rho - L_0 * g_rho||_2 / ||g_rho||_2, computed in the Fourier variable."""
    xi0 = solve_xi0_prolate(lam)
    profile = build_profiles(1)
    edges = np.linspace(-eta_max, eta_max, int(4 * eta_max) + 1)
    eta, w = composite_gauss_legendre(edges, PANEL_POINTS)
    mass = w * profile.envelope_hat(eta) ** 2
    defect = lam - l0_hat(xi0 + eta / rho)
    return math.sqrt(float(np.sum(mass * defect ** 2) / np.sum(mass)))


def fourier_concentration(samples, center, radius, panels=16):
    """Fraction of the L^2 mass of the transform of g within |xi - center| <= radius."""
    edges = np.linspace(center - radius, center + radius, panels + 1)
    xi, w = composite_gauss_legendre(edges, PANEL_POINTS)
    ghat = np.empty(xi.size, dtype=complex)
    weighted = samples.weights * samples.values
    step = max(1, EVAL_BLOCK // samples.size)
    for start in range(0, xi.size, step):
        phase = np.exp(-2j * math.pi * xi[start:start + step, None] * samples.x[None, :])
        ghat[start:start + step] = phase @ weighted
    return float(np.sum(w * np.abs(ghat) ** 2)) / samples.norm() ** 2


def _inner_targets(spec, radius, spacing):
    """Grid k h (staggered against the source cell centres) inside |x| < radius."""
    k = int(math.ceil(radius / spacing))
    axis = np.arange(-k, k + 1) * spacing
    x1, x2 = np.meshgrid(axis, axis, indexing='ij')
    points = np.stack([x1.ravel(), x2.ravel()], axis=-1)
    points = points[np.hypot(points[:, 0], points[:, 1]) < radius]
    return points, spacing * spacing * omega_weight(spec.R, spec.a, points)


def _far_targets(spec, inner, angles):
    """Polar grid in the meridian angle from |x| = inner out to the rim."""
    A = spec.a * spec.R
    start = math.asin(inner / A)
    radii = inner * 2.0 ** np.arange(1, 64)
    edges = [start] + [math.asin(r / A) for r in radii[radii < A]]
    rim = 0.5 * math.pi - min(3.0 / A, 0.5 * (0.5 * math.pi - edges[-1]))
    edges = np.unique(np.append(edges, [rim, 0.5 * math.pi]))
    psi, w_psi = composite_gauss_legendre(edges[edges >= start], PANEL_POINTS)
    theta = 2.0 * math.pi * np.arange(angles) / angles
    s, c = np.sin(psi), np.cos(psi)
    radial = A * s
    points = np.stack([np.outer(radial, np.cos(theta)).ravel(), np.outer(radial, np.sin(theta)).ravel()], axis=-1)
    area = A * A * s * np.sqrt((s / A) ** 2 + c * c) * w_psi
    weights = np.repeat(area * 2.0 * math.pi / angles, angles)
    return points, weights


def _sheet_potentials(spec, targets, sources, weighted):
    k1 = np.empty(targets.shape[0], dtype=complex)
    k2 = np.empty(targets.shape[0], dtype=complex)
    step = max(1, EVAL_BLOCK // sources.shape[0])
    y = sources[None, :, :]
    for start in range(0, targets.shape[0], step):
        x = targets[start:start + step, None, :]
        k1[start:start + step] = oblate_k1(spec.R, spec.a, x, y) @ weighted
        k2[start:start + step] = oblate_k2(spec.R, spec.a, x, y) @ weighted
    return k1, k2


def residual_oblate(spec, spacing=None, margin=TARGET_MARGIN, far_angles=FAR_ANGLES, pair_budget=PAIR_BUDGET):
    """||K1 f_rho||_omega + || |lambda| f_rho - K2 f_rho ||_omega over ||f_rho||_omega.

    Targets are a grid staggered against the sources around supp f_rho plus
    a polar grid in the meridian angle reaching the rim.
    """
    if spec.family != 'oblate':
        raise DomainError('residual_oblate needs an oblate quasi-mode, got %r' % (spec.family,))
    start = time.time()
    f = build_f_rho(spec, spacing)
    sources, values = f.support()
    area = f.spacing * f.spacing
    inner = min(spec.support_radius + margin, 0.5 * (spec.support_radius + spec.domain_radius))
    near, near_w = _inner_targets(spec, inner, f.spacing)
    far, far_w = _far_targets(spec, inner, far_angles)
    targets = np.concatenate([near, far])
    weights = np.concatenate([near_w, far_w])
    pairs = targets.shape[0] * sources.shape[0]
    if pairs > pair_budget:
        raise BudgetError('%d sources x %d targets = %.3g pairs exceed the budget of %.3g'
                          % (sources.shape[0], targets.shape[0], pairs, pair_budget))
    logger.debug('oblate residual R=%g: %d sources, %d near and %d far targets',
                 spec.R, sources.shape[0], near.shape[0], far.shape[0])

    k1, k2 = _sheet_potentials(spec, targets, sources, values * area)
    norm = omega_norm(values, np.full(values.shape, area), spec.R, spec.a, sources)
    same = math.sqrt(float(np.sum(weights * np.abs(k1) ** 2))) / norm
    cross = math.sqrt(float(np.sum(weights * np.abs(abs(spec.lam) * f_rho_values(spec, targets) - k2) ** 2))) / norm
    logger.info('oblate residual R=%g rho=%g: K1 part %.4g, K2 part %.4g (%.3g pairs, %.1f s)',
                spec.R, spec.rho, same, cross, pairs, time.time() - start)
    return ResidualReport('oblate', spec.R, spec.rho, same + cross,
                          {'k1': same, 'k2': cross, 'norm': norm, 'pairs': pairs, 'xi0': spec.xi0})


def _wall_patch(spec, points):
    """Gauss nodes on an arc-length x height = 2 x 2 patch of the side wall, facing xi0."""
    wall = spec.domain_radius
    half_angle = 0.5 * WALL_PATCH / wall
    theta, w_theta = gauss_legendre(points, -half_angle, half_angle)
    x3, w3 = gauss_legendre(points, -1.0, 1.0)
    T, Z = np.meshgrid(theta, x3, indexing='ij')
    targets = np.stack([wall * np.cos(T).ravel(), wall * np.sin(T).ravel(), Z.ravel()], axis=-1)
    return targets, np.outer(wall * w_theta, w3).ravel()


def residual_flat(spec, spacing=None, wall_points=16, edge_tol=1e-8, pad=4):
    """Sheet residual in the planar H^(1/2) norm and the side-wall term, both over ||f_rho||_(H^1/2).

    On the sheets the operator is (1/2) P_2 * phi of the opposite sheet, so
    the residual has symbol |lambda| - (1/2) exp(-4 pi |xi|) on f_rho. ``sheet_l2``
    applies the operator with :func:`npspec.kernels.flat_sheet_apply` instead
    and measures lambda phi+ - (K phi)+ in L^2 over the sampling window.
    """
    if spec.family != 'flat':
        raise DomainError('residual_flat needs a flat quasi-mode, got %r' % (spec.family,))
    start = time.time()
    phi = build_phi_rho(spec, spacing)
    f = phi.plus
    check_decay(f.values, edge_tol, 'f_rho')
    h = f.spacing
    shape = tuple(pad * n for n in f.values.shape)
    fhat = fft.fft2(f.values, s=shape) * h * h
    freqs = planar_frequencies(shape, h)
    weight = np.sqrt(1.0 + freqs ** 2)
    symbol = abs(spec.lam) - 0.5 * poisson_symbol(freqs, 2.0)
    mass = np.abs(fhat) ** 2 * weight
    sheet = math.sqrt(float(np.sum(symbol ** 2 * mass) / np.sum(mass)))
    norm = h_half_norm(f.values, h, edge_tol=edge_tol, pad=pad)
    # same residual applied in physical space, L^2 on the sampled window
    upper, _ = flat_sheet_apply(phi.plus.values, phi.minus.values, h, pad=pad, edge_tol=edge_tol)
    sheet_l2 = float(np.linalg.norm(spec.lam * f.values - upper) / np.linalg.norm(f.values))

    sources, plus = f.support()
    minus = plus if phi.sign > 0 else -plus
    targets, weights = _wall_patch(spec, wall_points)
    potential = flat_wall_potential(plus, minus, sources, np.full(plus.shape, h * h), targets)
    sidewall = math.sqrt(float(np.sum(weights * np.abs(potential) ** 2))) / norm
    logger.info('flat residual R=%g rho=%g: sheet %.4g, side wall %.4g (%.1f s)',
                spec.R, spec.rho, sheet, sidewall, time.time() - start)
    return ResidualReport('flat', spec.R, spec.rho, sheet,
                          {'sheet': sheet, 'sheet_l2': sheet_l2, 'sidewall': sidewall, 'norm': norm,
                           'xi0': spec.xi0})


# -- H^(1/2) norms ---------------------------------------------------------

def h_half_norm(f, spacing, weight='bessel', edge_tol=1e-8, pad=2):
    """Planar H^(1/2) norm of grid samples by FFT.

    ``weight='bessel'`` uses (1 + |xi|^2)^(1/2); ``weight='gagliardo'`` uses
    1 + 8 pi^2 |xi|, the multiplier of the double-integral form.
    """
    f = np.asarray(f)
    if f.ndim != 2:
        raise DomainError('h_half_norm expects a 2-D array of samples')
    check_decay(f, edge_tol, 'H^1/2 density')
    shape = tuple(pad * n for n in f.shape)
    freqs = planar_frequencies(shape, spacing)
    if weight == 'bessel':
        multiplier = np.sqrt(1.0 + freqs ** 2)
    elif weight == 'gagliardo':
        multiplier = 1.0 + 8.0 * math.pi ** 2 * freqs
    else:
        raise DomainError("weight must be 'bessel' or 'gagliardo', got %r" % (weight,))
    fhat = fft.fft2(f, s=shape) * spacing * spacing
    cell = 1.0 / (shape[0] * spacing * shape[1] * spacing)
    return math.sqrt(float(np.sum(multiplier * np.abs(fhat) ** 2)) * cell)


def _exterior_integral(points, half1, half2):
    """int over the outside of [-half1, half1] x [-half2, half2] of |x - z|^-3 dz."""
    px, py = points[:, 0], points[:, 1]
    total = np.zeros(px.shape)
    for d, lo, hi in ((half1 - px, half2 + py, half2 - py), (half1 + px, half2 + py, half2 - py),
                      (half2 - py, half1 + px, half1 - px), (half2 + py, half1 + px, half1 - px)):
        total += (lo / np.hypot(d, lo) + hi / np.hypot(d, hi)) / d
    return total


def gagliardo_norm(f, spacing):
    """(||h||^2 + int int |h(x) - h(z)|^2 / |x - z|^3 dx dz)^(1/2) for h vanishing off the grid.

    Midpoint rule over pairs of cells, the exact integral of the linearised
    difference inside each cell, and the exact outer integral for pairs with
    one point off the grid. Quadratic in the number of samples.
    """
    f = np.asarray(f)
    if f.ndim != 2:
        raise DomainError('gagliardo_norm expects a 2-D array of samples')
    h = float(spacing)
    n1, n2 = f.shape
    a1 = (np.arange(n1) - 0.5 * (n1 - 1)) * h
    a2 = (np.arange(n2) - 0.5 * (n2 - 1)) * h
    x1, x2 = np.meshgrid(a1, a2, indexing='ij')
    points = np.stack([x1.ravel(), x2.ravel()], axis=-1)
    v = f.ravel()
    area = h * h

    l2 = area * float(np.sum(np.abs(v) ** 2))
    dist = np.sqrt(((points[:, None, :] - points[None, :, :]) ** 2).sum(axis=-1))
    np.fill_diagonal(dist, np.inf)
    pairs = area * area * float(np.sum(np.abs(v[:, None] - v[None, :]) ** 2 / dist ** 3))
    g1, g2 = np.gradient(f, h)
    cells = SELF_CELL * h ** 3 * float(np.sum(np.abs(g1) ** 2 + np.abs(g2) ** 2))
    outside = 2.0 * area * float(np.sum(np.abs(v) ** 2 * _exterior_integral(points, 0.5 * n1 * h, 0.5 * n2 * h)))
    return math.sqrt(l2 + pairs + cells + outside)
