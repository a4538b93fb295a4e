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

"""Gauss-Legendre rules shared by the kernel, spectra and quasi-mode code."""

from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre

from npspec.errors import DomainError


@lru_cache(maxsize=64)
def _reference_rule(order):
    nodes, weights = legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre(order, a=-1.0, b=1.0):
    """Gauss-Legendre nodes and weights on [a, b]."""
    if order < 1:
        raise DomainError('quadrature order must be positive, got %r' % (order,))
    x, w = _reference_rule(int(order))
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def composite_gauss_legendre(edges, order=16):
    """Composite rule with ``order`` points on every panel [edges[i], edges[i+1]]."""
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise DomainError('panel edges must be strictly increasing')
    x, w = _reference_rule(int(order))
    half = 0.5 * np.diff(edges)
    nodes = edges[:-1, None] + half[:, None] * (x[None, :] + 1.0)
    weights = half[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()


def dyadic_edges(a, b, smallest):
    """Panel edges on [a, b] halving in width toward ``a`` down to ``smallest``."""
    length = b - a
    if length <= 0:
        raise DomainError('empty interval [%r, %r]' % (a, b))
    smallest = min(max(smallest, 1e-300), length)
    levels = max(int(np.ceil(np.log2(length / smallest))), 0)
    offsets = length * 2.0 ** -np.arange(levels, -1, -1)
    return np.concatenate(([a], a + offsets))


def graded_rule(a, b, smallest, order=16):
    """Composite rule refined dyadically toward ``a``."""
    return composite_gauss_legendre(dyadic_edges(a, b, smallest), order)


def ferrers_q(kmax, x):
    """Ferrers functions of the second kind Q_0..Q_kmax on (-1, 1).

    Both kinds oscillate inside the cut, so the forward recurrence is stable.
    """
    x = np.asarray(x, dtype=float)
    q = np.empty((kmax + 1,) + x.shape)
    q[0] = np.arctanh(x)
    if kmax >= 1:
        q[1] = x * q[0] - 1.0
    for k in range(1, kmax):
        q[k + 1] = ((2 * k + 1) * x * q[k] - k * q[k - 1]) / (k + 1)
    return q


def log_moments(kmax, x):
    """I_k(x) = int_{-1}^{1} log|x - s| P_k(s) ds for k = 0..kmax."""
    x = np.asarray(x, dtype=float)
    q = ferrers_q(kmax + 1, x)
    moments = np.empty((kmax + 1,) + x.shape)
    moments[0] = (1 + x) * np.log1p(x) + (1 - x) * np.log1p(-x) - 2.0
    for k in range(1, kmax + 1):
        moments[k] = 2.0 / (2 * k + 1) * (q[k + 1] - q[k - 1])
    return moments


def log_product_weights(targets, nodes, weights, a=-1.0, b=1.0):
    """Weights W with sum_j W[i, j] f(y_j) ~= int_a^b log|x_i - y| f(y) dy.

    ``nodes``/``weights`` must be an n-point Gauss-Legendre rule on [a, b];
    f is replaced by its degree n - 1 Legendre interpolant, whose moments
    against the logarithm are exact.
    """
    half = 0.5 * (b - a)
    centre = 0.5 * (a + b)
    s = (np.asarray(nodes, dtype=float) - centre) / half
    ref_w = np.asarray(weights, dtype=float) / half
    t = (np.asarray(targets, dtype=float) - centre) / half
    n = s.size
    moments = log_moments(n - 1, t).T
    vander = legendre.legvander(s, n - 1)
    scale = (2 * np.arange(n) + 1) / 2.0
    ref = (moments * scale) @ vander.T * ref_w
    return half * (ref + np.log(half) * ref_w)
