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

"""Nystrom matrices of the reduced NP operators and their dense spectra.

Prolate spheroids are discretised on the axis (-R, R) with one global
Gauss-Legendre rule; the row sums come from K[1] = 1/2 and, in the default
``product`` scheme, the logarithmic part of H_R is integrated exactly
against the Legendre interpolant of the density.

Oblate spheroids are discretised along the meridian angle psi, where the
surface is smooth through the rim. The matrix is kept in sheet order,
[[K1, K2], [K2, K1]] with the lower sheet node k the mirror image of the
upper node k, so that even and odd densities see K1 + K2 and K1 - K2.
"""

import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from npspec.errors import DomainError, EigenSolverError, ResolutionError
from npspec.kernels import (OblateSpheroid, ProlateProfile, h_kernel_matrix, h_log_coefficient,
                            meridian_diagonal_defect, meridian_mode_kernels)
from npspec.prolate import r_to_l
from npspec.quadrature import gauss_legendre, graded_rule, log_product_weights
from npspec.results import (IMAG_RTOL, SpectralValue, SpectrumResult, SpheroidGeometry, nearest_distance)

logger = logging.getLogger(__name__)

DEFAULT_N = 256
MIN_N = 16
PROLATE_SCHEMES = ('product', 'subtraction')
OBLATE_SCHEME = 'meridian'
PARITIES = ('even', 'odd')
ALPHA_PANEL_POINTS = 16
# elements of one (targets, sources, alpha) block in the oblate assembly
ASSEMBLY_BLOCK = 1 << 21


@dataclass
class NystromGrid:
    """Nodes of a Nystrom rule.

    ``weights`` integrate in the parameter the kernel is written in (x3 for
    prolate, psi for oblate); ``area_weights`` are the surface elements of
    the nodes, summing to the area of the discretised surface.
    """
    nodes: np.ndarray
    weights: np.ndarray
    area_weights: np.ndarray
    coordinate: str = 't'

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        self.area_weights = np.asarray(self.area_weights, dtype=float)
        if not (self.nodes.shape == self.weights.shape == self.area_weights.shape):
            raise DomainError('nodes and weights must have the same shape')
        if np.any(self.weights <= 0) or np.any(self.area_weights <= 0):
            raise DomainError('quadrature weights must be positive')

    @property
    def size(self):
        return self.nodes.size

    @property
    def area(self):
        return float(np.sum(self.area_weights))

    def half(self):
        """Upper-sheet half of a two-sheet grid."""
        n = self.size // 2
        return NystromGrid(self.nodes[:n], self.weights[:n], self.area_weights[:n], self.coordinate)


@dataclass
class DiscreteOperator:
    grid: NystromGrid
    matrix: np.ndarray
    geometry: SpheroidGeometry
    scheme: str
    mode: int = 0
    parity: str = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise DomainError('operator matrix must be square, got shape %r' % (self.matrix.shape,))
        if not np.all(np.isfinite(self.matrix)):
            raise DomainError('operator matrix has non-finite entries (%s)' % self.tag)

    @property
    def family(self):
        return self.geometry.family

    @property
    def N(self):
        return self.matrix.shape[0]

    @property
    def tag(self):
        if self.parity is None:
            return 'm=%d' % self.mode
        return 'm=%d,%s' % (self.mode, self.parity)


def _check_size(N):
    if int(N) != N or N < MIN_N:
        raise DomainError('need an integer N >= %d, got %r' % (MIN_N, N))
    return int(N)


# -- prolate ---------------------------------------------------------------

def prolate_grid(R, N):
    profile = ProlateProfile(float(R))
    nodes, weights = gauss_legendre(N, -profile.R, profile.R)
    return NystromGrid(nodes, weights, 2.0 * math.pi * profile.measure(nodes) * weights, 't')


def prolate_geometry(R):
    R = float(R)
    return SpheroidGeometry('prolate', R=R, L=r_to_l(R) if R > 1.0 else None)


def discretize_prolate(R, N=DEFAULT_N, scheme='product'):
    """Nystrom matrix of H_R acting on axisymmetric densities."""
    R = float(R)
    N = _check_size(N)
    if scheme not in PROLATE_SCHEMES:
        raise DomainError('scheme must be one of %s, got %r' % (', '.join(PROLATE_SCHEMES), scheme))
    grid = prolate_grid(R, N)
    if 2.0 * R / N > 1.0:
        raise ResolutionError('N = %d does not resolve the axis (-%g, %g); need N >= %d'
                              % (N, R, R, int(math.ceil(2.0 * R))))
    t, w = grid.nodes, grid.weights
    diag = np.arange(N)

    A = h_kernel_matrix(R, t, t) * w
    A[diag, diag] = 0.0
    A[diag, diag] = 0.5 - A.sum(axis=1)

    if scheme == 'product':
        gap = np.abs(t[:, None] - t[None, :])
        gap[diag, diag] = 1.0
        W = log_product_weights(t, t, w, -R, R)
        C = -h_log_coefficient(R, t)[:, None] * (W - w * np.log(gap))
        C[diag, diag] = 0.0
        C[diag, diag] = -C.sum(axis=1)
        A += C

    logger.debug('prolate Nystrom matrix R=%g N=%d scheme=%s', R, N, scheme)
    return DiscreteOperator(grid, A, prolate_geometry(R), scheme)


# -- oblate ----------------------------------------------------------------

def meridian_grid(R, a, N):
    """Two-sheet grid in the meridian angle, N nodes per sheet.

    Each sheet has a main panel on [0, pi/2 - delta] and a rim panel of
    width delta = min(pi/4, 3/(aR)) carrying N/4 of the nodes, where the
    meridian turns over a length ~ 1/(aR).
    """
    radius = OblateSpheroid(float(R), float(a)).radius
    N = _check_size(N)
    delta = min(0.25 * math.pi, 3.0 / radius)
    n_rim = N // 4
    main_x, main_w = gauss_legendre(N - n_rim, 0.0, 0.5 * math.pi - delta)
    rim_x, rim_w = gauss_legendre(n_rim, 0.5 * math.pi - delta, 0.5 * math.pi)
    upper = np.concatenate([main_x, rim_x])
    weights = np.concatenate([main_w, rim_w])
    nodes = np.concatenate([upper, math.pi - upper])
    weights = np.concatenate([weights, weights])
    s, c = np.sin(nodes), np.cos(nodes)
    area = 2.0 * math.pi * radius * s * np.sqrt((radius * c) ** 2 + s * s) * weights
    return NystromGrid(nodes, weights, area, 'psi')


def two_sheet_block(same, cross):
    """[[K1, K2], [K2, K1]] from the same-sheet and cross-sheet blocks."""
    same = np.asarray(same)
    cross = np.asarray(cross)
    if same.shape != cross.shape or same.ndim != 2:
        raise DomainError('sheet blocks must be square matrices of equal shape')
    return np.block([[same, cross], [cross, same]])


def parity_split(matrix):
    """K1 + K2 and K1 - K2 of a sheet-ordered two-sheet matrix."""
    matrix = np.asarray(matrix)
    n2 = matrix.shape[0]
    if matrix.ndim != 2 or n2 != matrix.shape[1] or n2 % 2:
        raise DomainError('two-sheet matrix must be square with even size, got shape %r' % (matrix.shape,))
    n = n2 // 2
    same, cross = matrix[:n, :n], matrix[:n, n:]
    return {'even': same + cross, 'odd': same - cross}


def _meridian_blocks(R, a, N, modes):
    """Same- and cross-sheet blocks for every azimuthal order in ``modes``."""
    radius = OblateSpheroid(float(R), float(a)).radius
    grid = meridian_grid(R, a, N)
    arc = radius * 0.5 * math.pi / (N - N // 4)
    if arc > 1.0:
        raise ResolutionError('N = %d per sheet leaves meridian spacing %.3g > 1 for aR = %g'
                              % (N, arc, radius))
    psi, w = grid.nodes, grid.weights
    m_max = max(modes)
    spacing = float(np.min(np.diff(np.sort(psi[:N]))))
    alpha, alpha_w = graded_rule(0.0, math.pi, 0.01 * spacing / radius, ALPHA_PANEL_POINTS)
    chunk = max(1, ASSEMBLY_BLOCK // (psi.size * alpha.size))
    logger.debug('meridian assembly aR=%g N=%d m<=%d with %d alpha nodes, %d rows per block',
                  radius, N, m_max, alpha.size, chunk)

    # rows of the upper sheet; the lower rows follow by mirror symmetry
    rows = np.empty((m_max + 1, N, 2 * N))
    for start in range(0, N, chunk):
        stop = min(start + chunk, N)
        rows[:, start:stop] = meridian_mode_kernels(radius, psi[start:stop], psi, alpha, alpha_w, m_max)
    rows *= w
    diag = np.arange(N)
    rows[:, diag, diag] = 0.0
    row_sum = 0.5 - rows[0].sum(axis=1)

    blocks = {}
    for m in modes:
        upper = rows[m].copy()
        upper[diag, diag] = row_sum - w[:N] * meridian_diagonal_defect(radius, m)
        blocks[m] = (upper[:, :N], upper[:, N:])
    return grid, blocks


def _check_mode(m):
    if int(m) != m or m < 0:
        raise DomainError('azimuthal order must be a non-negative integer, got %r' % (m,))
    return int(m)


def oblate_geometry(R, a):
    return SpheroidGeometry('oblate', R=float(R), a=float(a))


def discretize_oblate_sheets(R, a=1.0, m=0, N=DEFAULT_N):
    """Full two-sheet operator of azimuthal order m (2N x 2N, sheet order)."""
    m = _check_mode(m)
    grid, blocks = _meridian_blocks(R, a, N, [m])
    return DiscreteOperator(grid, two_sheet_block(*blocks[m]), oblate_geometry(R, a), OBLATE_SCHEME, mode=m)


def discretize_oblate(R, a=1.0, m=0, parity='even', N=DEFAULT_N):
    """Parity block K1 +- K2 of azimuthal order m on the upper sheet grid."""
    if parity not in PARITIES:
        raise DomainError("parity must be 'even' or 'odd', got %r" % (parity,))
    return discretize_oblate_modes(R, a, [_check_mode(m)], N, (parity,))[(m, parity)]


def discretize_oblate_modes(R, a=1.0, modes=range(9), N=DEFAULT_N, parities=PARITIES):
    """Parity blocks for several azimuthal orders from one kernel evaluation."""
    modes = sorted({_check_mode(m) for m in modes})
    if not modes:
        raise DomainError('no azimuthal orders requested')
    for parity in parities:
        if parity not in PARITIES:
            raise DomainError("parity must be 'even' or 'odd', got %r" % (parity,))
    grid, blocks = _meridian_blocks(R, a, N, modes)
    half = grid.half()
    geometry = oblate_geometry(R, a)
    operators = {}
    for m in modes:
        split = parity_split(two_sheet_block(*blocks[m]))
        for parity in parities:
            operators[(m, parity)] = DiscreteOperator(half, split[parity], geometry, OBLATE_SCHEME,
                                                      mode=m, parity=parity)
    return operators


# -- eigenvalues -----------------------------------------------------------

def condition_estimate(matrix):
    try:
        return float(np.linalg.cond(matrix, 1))
    except np.linalg.LinAlgError:
        return math.inf


def eigenvalues(op, rtol=IMAG_RTOL):
    """Dense nonsymmetric eigenvalues, sorted by real part (descending).

    Imaginary parts are kept as residuals of the discretisation and logged
    when they exceed ``rtol * (1 + |real|)``.
    """
    start = time.time()
    try:
        values = linalg.eigvals(op.matrix, check_finite=True)
    except (linalg.LinAlgError, ValueError) as e:
        raise EigenSolverError('eigensolver failed on the %dx%d %s operator (%s): %s; '
                               '1-norm condition estimate %.3g'
                               % (op.N, op.N, op.family, op.tag, e, condition_estimate(op.matrix))) from e
    values = values[np.argsort(-values.real, kind='stable')]
    labels = ['%s,k=%d' % (op.tag, k) for k in range(values.size)]
    result = SpectrumResult(
        values=[SpectralValue(float(v.real), float(v.imag), label) for v, label in zip(values, labels)],
        geometry=op.geometry, N=op.N, scheme=op.scheme,
        metadata={'mode': op.mode, 'parity': op.parity})
    residual = result.max_imag_residual()
    if residual >= rtol:
        logger.warning('imaginary residual %.3g above %.3g for %s (%s)', residual, rtol, result.describe(), op.tag)
    logger.debug('eigenvalues of %s (%s): %d values in %.3f s', result.describe(), op.tag,
                 values.size, time.time() - start)
    return result


# -- density scans ---------------------------------------------------------

@dataclass
class CoverageReport:
    """Nearest computed eigenvalue for every target of a lambda grid."""
    family: str
    R_list: tuple
    lambda_grid: np.ndarray
    nearest: np.ndarray
    eps: float
    spectra: dict = field(default_factory=dict, repr=False)

    @property
    def covered(self):
        return self.nearest <= self.eps

    @property
    def all_covered(self):
        return bool(np.all(self.covered))

    def uncovered(self):
        return [float(x) for x in self.lambda_grid[~self.covered]]

    def count_below(self, level, R=None, parity=None):
        """Number of eigenvalues below ``level``, optionally for one R and parity."""
        count = 0
        for (r, _, p), spectrum in self.spectra.items():
            if (R is None or r == R) and (parity is None or p == parity):
                count += int(np.sum(spectrum.real < level))
        return count

    def to_dict(self):
        return {
            'family': self.family,
            'R_list': list(self.R_list),
            'eps': self.eps,
            'all_covered': self.all_covered,
            'lambda_grid': [float(x) for x in self.lambda_grid],
            'nearest': [float(x) for x in self.nearest],
            'covered': [bool(x) for x in self.covered],
            'uncovered': self.uncovered(),
        }


def density_scan(family, R_list, lambda_grid, eps, N=DEFAULT_N, m_max=8, parities=PARITIES, a=1.0,
                 scheme='product', check_bounds=True):
    """Distance from each lambda to the spectra of the family over R_list.

    Prolate scans use the axisymmetric operator; oblate scans every
    azimuthal order m <= m_max in the requested parities.
    """
    if not eps > 0:
        raise DomainError('eps must be positive, got %r' % (eps,))
    if family not in ('prolate', 'oblate'):
        raise DomainError("density scans exist for 'prolate' and 'oblate', got %r" % (family,))
    lambda_grid = np.asarray(lambda_grid, dtype=float)
    spectra = {}
    start = time.time()
    for R in R_list:
        if family == 'prolate':
            spectra[(R, 0, None)] = eigenvalues(discretize_prolate(R, N, scheme))
        else:
            operators = discretize_oblate_modes(R, a, range(m_max + 1), N, parities)
            for (m, parity), op in operators.items():
                spectra[(R, m, parity)] = eigenvalues(op)
    if check_bounds:
        for spectrum in spectra.values():
            spectrum.check_bounds()
    collected = np.concatenate([s.real for s in spectra.values()]) if spectra else np.empty(0)
    report = CoverageReport(family, tuple(R_list), lambda_grid, nearest_distance(collected, lambda_grid),
                            float(eps), spectra)
    logger.info('%s density scan over R=%s: %d eigenvalues, %d/%d targets within %g (%.1f s)',
                family, list(R_list), collected.size, int(np.sum(report.covered)), lambda_grid.size, eps,
                time.time() - start)
    return report
