# Copyright 2026 The npspec Authors
#
# Licensed under the Apache License, Version 2.0 (the "License"); you may not
# use this file except in compliance with the License. You may obtain a copy of
# the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations under
# the License.

import math
import unittest
import warnings

import mpmath
import numpy as np
from scipy import integrate

from npspec import DomainError, LegendreOverflowError, NearSingularWarning
from npspec.specfun import (bessel_k, khat, legendre_p, legendre_pq_product_derivative,
                            legendre_pq_scaled_derivative, legendre_q)

GRID = (1.01, 1.5, 2.0, 10.0)


def _mp_pair(n):
    def p(t):
        return mpmath.legendre(n, t)

    def q(t):
        tail = mpmath.fsum(mpmath.legendre(k - 1, t) * mpmath.legendre(n - k, t) / k
                           for k in range(1, n + 1))
        return p(t) * mpmath.log((t + 1) / (t - 1)) / 2 - tail
    return p, q


def mp_legendre(n, m, z, kind):
    """Hobson P_n^m / Q_n^m at 50 digits, by differentiating the degree-n functions."""
    with mpmath.workdps(50):
        p, q = _mp_pair(n)
        f = p if kind == 'p' else q
        z = mpmath.mpf(z)
        return float((z * z - 1) ** (mpmath.mpf(m) / 2) * mpmath.diff(f, z, m))


def mp_product_derivative(n, m, z):
    """d/dz [(z^2 - 1)^m P_n^(m) Q_n^(m)] by the Leibniz rule."""
    with mpmath.workdps(50):
        p, q = _mp_pair(n)
        z = mpmath.mpf(z)
        u2 = z * z - 1
        dp, dp1 = mpmath.diff(p, z, m), mpmath.diff(p, z, m + 1)
        dq, dq1 = mpmath.diff(q, z, m), mpmath.diff(q, z, m + 1)
        value = u2 ** m * (dp1 * dq + dp * dq1)
        if m:
            value += 2 * m * z * u2 ** (m - 1) * dp * dq
        return float(value)


class TestCase(unittest.TestCase):
    def assertRelativeClose(self, x, y, rtol):
        scale = max(abs(y), 1e-300)
        self.assertLess(abs(x - y) / scale, rtol, '%r != %r (rtol %g)' % (x, y, rtol))

    def assertAllClose(self, actual, desired, rtol=1e-7, atol=0.0):
        np.testing.assert_allclose(actual, desired, rtol=rtol, atol=atol)


class LegendreTest(TestCase):
    def test_first_degree(self):
        self.assertEqual(legendre_p(1, 0, 2.0), 2.0)
        self.assertRelativeClose(legendre_q(1, 0, 2.0), math.log(3.0) - 1.0, 1e-14)

    def test_order_zero_q(self):
        for z in GRID:
            self.assertRelativeClose(legendre_q(0, 0, z), 0.5 * math.log((z + 1) / (z - 1)), 1e-14)

    def test_p_at_one(self):
        self.assertAlmostEqual(legendre_p(2, 0, 1.0 + 1e-12), 1.0, places=10)

    def test_against_multiprecision(self):
        cases = [(3, 2, 1.5), (2, 1, 3.0), (5, 0, 1.01), (4, 3, 2.0), (7, 2, 10.0), (6, 6, 1.2)]
        for n, m, z in cases:
            self.assertRelativeClose(legendre_p(n, m, z), mp_legendre(n, m, z, 'p'), 1e-12)
            self.assertRelativeClose(legendre_q(n, m, z), mp_legendre(n, m, z, 'q'), 1e-11)

    def test_q_sign_convention(self):
        for n in range(4):
            for m in range(n + 1):
                for z in GRID:
                    self.assertGreater((-1) ** m * legendre_q(n, m, z), 0.0)

    def test_three_term_recurrence(self):
        for z in GRID:
            for f in (legendre_p, legendre_q):
                values = [f(n, 0, z) for n in range(22)]
                for n in range(1, 21):
                    lhs = (2 * n + 1) * z * values[n]
                    rhs = (n + 1) * values[n + 1] + n * values[n - 1]
                    self.assertRelativeClose(rhs, lhs, 1e-10)

    def test_ode_residual(self):
        for z in GRID:
            h = 1e-2 * (z - 1.0)
            for n in range(1, 6):
                for m in range(0, min(n, 2) + 1):
                    for f in (legendre_p, legendre_q):
                        y = [f(n, m, z + k * h) for k in (-2, -1, 0, 1, 2)]
                        d1 = (y[0] - 8 * y[1] + 8 * y[3] - y[4]) / (12 * h)
                        d2 = (-y[0] + 16 * y[1] - 30 * y[2] + 16 * y[3] - y[4]) / (12 * h * h)
                        terms = [(1 - z * z) * d2, -2 * z * d1, (n * (n + 1) - m * m / (1 - z * z)) * y[2]]
                        scale = sum(abs(t) for t in terms)
                        self.assertLess(abs(sum(terms)), 1e-6 * scale, (f.__name__, n, m, z))

    def test_domain(self):
        with self.assertRaises(DomainError):
            legendre_p(1, 0, 1.0)
        with self.assertRaises(DomainError):
            legendre_q(1, 2, 2.0)
        with self.assertRaises(ValueError):
            legendre_q(2, 0, 0.5)

    def test_overflow_is_flagged(self):
        with self.assertRaises(LegendreOverflowError) as ctx:
            legendre_p(50, 50, 1e6)
        self.assertIn('legendre_pq_product_derivative', str(ctx.exception))
        self.assertIsInstance(ctx.exception, OverflowError)
        # the product that the eigenvalues need is still finite there
        self.assertTrue(math.isfinite(legendre_pq_scaled_derivative(50, 50, 1e6)))


class ProductDerivativeTest(TestCase):
    def test_symbolic_degree_one(self):
        z = 2.0
        expected = z * math.log(3.0) - z * z / (z * z - 1) - 1.0
        self.assertRelativeClose(legendre_pq_product_derivative(1, 0, z), expected, 1e-13)

    def test_against_multiprecision(self):
        for n, m, z in [(2, 0, 10.0), (3, 1, 1.5), (4, 2, 2.0), (5, 5, 1.2), (6, 3, 10.0)]:
            self.assertRelativeClose(legendre_pq_product_derivative(n, m, z), mp_product_derivative(n, m, z), 1e-10)

    def test_finite_difference(self):
        step = 1e-6
        L = 10.0

        def product(x):
            return legendre_p(2, 0, x) * legendre_q(2, 0, x)
        fd = (product(L + step) - product(L - step)) / (2 * step)
        self.assertRelativeClose(legendre_pq_product_derivative(2, 0, L), fd, 1e-7)

    def test_endpoint_blowup(self):
        L = 1.0 + 1e-7
        for n in (1, 2, 3):
            ratio = legendre_pq_product_derivative(n, 0, L) * 2.0 * (1.0 - L)
            self.assertAlmostEqual(ratio, 1.0, places=4)

    def test_near_singular_warning(self):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter('always')
            legendre_pq_product_derivative(1, 0, 1.0 + 1e-9)
        self.assertTrue(any(issubclass(w.category, NearSingularWarning) for w in caught))

    def test_scaled_limits(self):
        self.assertAlmostEqual(legendre_pq_scaled_derivative(3, 0, 1.0 + 1e-12), -1.0, places=9)
        for n, m in [(1, 0), (2, 1), (3, 3)]:
            limit = -math.factorial(n + m) / math.factorial(n - m) / (2 * n + 1)
            self.assertRelativeClose(legendre_pq_scaled_derivative(n, m, 1e5), limit, 1e-8)


class BesselTest(TestCase):
    def test_small_argument(self):
        x = 1e-8
        self.assertAlmostEqual(x * bessel_k(1, x), 1.0, places=8)

    def test_derivative_relation(self):
        x, h = 1.3, 1e-5
        fd = ((x + h) * bessel_k(1, x + h) - (x - h) * bessel_k(1, x - h)) / (2 * h)
        self.assertAlmostEqual(fd, -x * bessel_k(0, x), places=8)

    def test_multiprecision(self):
        for order in (0, 1):
            for x in (0.01, 1.0, 7.5, 40.0):
                self.assertRelativeClose(bessel_k(order, x), float(mpmath.besselk(order, x)), 1e-12)

    def test_vectorised(self):
        x = np.array([0.5, 1.0, 2.0])
        self.assertAllClose(bessel_k(0, x), [bessel_k(0, v) for v in x], rtol=1e-15)

    def test_domain(self):
        with self.assertRaises(DomainError):
            bessel_k(1, 0.0)
        with self.assertRaises(DomainError):
            bessel_k(2, 1.0)


class KhatTest(TestCase):
    def test_value_at_zero(self):
        self.assertEqual(khat(0.0), 2.0)

    def test_even(self):
        for xi in (0.1, 0.7, 3.0):
            self.assertEqual(khat(xi), khat(-xi))

    def test_direct_quadrature(self):
        for xi in (0.1, 0.25, 0.5, 1.0, 2.0, 5.0):
            value, _ = integrate.quad(lambda t: (1.0 + t * t) ** -1.5, 0.0, np.inf,
                                      weight='cos', wvar=2.0 * np.pi * xi, epsabs=1e-13)
            self.assertAlmostEqual(khat(xi), 2.0 * value, places=8)

    def test_decreasing(self):
        values = khat(np.linspace(0.0, 10.0, 50))
        self.assertTrue(np.all(np.diff(values) < 0))
        self.assertLess(khat(5.0) / khat(1.0), 1e-9)


if __name__ == '__main__':
    unittest.main()
