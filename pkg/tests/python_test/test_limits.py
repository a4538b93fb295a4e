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
from unittest import mock

import numpy as np
from scipy import integrate

from npspec import DomainError, NearSingularWarning, SingularKernelError
from npspec.limits import (l0_hat, l0_hat_direct, l0_kernel, poisson_hat, poisson_kernel, solve_xi0_flat,
                           solve_xi0_prolate, two_sheet_symbol)


class TestCase(unittest.TestCase):
    def assertAllClose(self, actual, desired, rtol=1e-7, atol=0.0):
        np.testing.assert_allclose(actual, desired, rtol=rtol, atol=atol)


class LimitKernelTest(TestCase):
    def test_methods_agree(self):
        for t in (1e-3, 0.3, 1.0, 7.0):
            self.assertAlmostEqual(l0_kernel(t) / l0_kernel(t, method='elliptic'), 1.0, places=9)

    def test_even_and_tail(self):
        self.assertEqual(l0_kernel(-0.4, method='elliptic'), l0_kernel(0.4, method='elliptic'))
        self.assertLess(abs(l0_kernel(50.0, method='elliptic') * 2.0 * 50.0 ** 3 - 1.0), 1e-2)

    def test_total_mass(self):
        def kernel(t):
            return l0_kernel(t, method='elliptic')
        near, _ = integrate.quad(kernel, 0.0, 1.0, epsabs=1e-12, limit=200)
        far, _ = integrate.quad(kernel, 1.0, np.inf, epsabs=1e-12, limit=200)
        self.assertAlmostEqual(2.0 * (near + far), 0.5, places=8)

    def test_singular(self):
        with self.assertRaises(SingularKernelError):
            l0_kernel(0.0)
        with self.assertRaises(DomainError):
            l0_kernel(1.0, method='trapezoid')


class SymbolTest(TestCase):
    def test_value_at_zero(self):
        self.assertAlmostEqual(l0_hat(0.0), 0.5, places=12)

    def test_against_direct_transform(self):
        for xi in (0.0, 0.1, 0.5, 1.0, 3.0):
            self.assertAlmostEqual(l0_hat(xi), l0_hat_direct(xi), places=6, msg=xi)

    def test_decreasing(self):
        values = l0_hat(np.linspace(0.0, 5.0, 60))
        self.assertEqual(values.shape, (60,))
        self.assertTrue(np.all(np.diff(values) < 0))
        self.assertTrue(np.all(values > 0))

    def test_even(self):
        self.assertEqual(l0_hat(-0.7), l0_hat(0.7))

    def test_decay_rate(self):
        xi = np.geomspace(1e2, 1e4, 9)
        slope = np.polyfit(np.log(xi), np.log(l0_hat(xi)), 1)[0]
        self.assertTrue(-1.01 <= slope <= -0.8, slope)
        self.assertLess(abs(8.0 * math.pi * 1e4 * l0_hat(1e4) - 1.0), 1e-2)


class SolveXi0Test(TestCase):
    def test_roots(self):
        for lam in (0.45, 0.3, 0.1, 0.01):
            xi0 = solve_xi0_prolate(lam)
            self.assertGreater(xi0, 0.0)
            self.assertLess(abs(l0_hat(xi0) - lam), 1e-10)

    def test_full_output(self):
        xi0, capped = solve_xi0_prolate(0.3, full_output=True)
        self.assertFalse(capped)
        self.assertEqual(xi0, solve_xi0_prolate(0.3))
        self.assertLess(abs(l0_hat(xi0) - 0.3), 1e-10)

    def test_solver_failure(self):
        with mock.patch('npspec.limits.optimize.brentq', side_effect=RuntimeError('failed to converge')):
            with self.assertRaises(DomainError) as ctx:
                solve_xi0_prolate(0.3)
        self.assertIsInstance(ctx.exception.__cause__, RuntimeError)

    def test_top_of_spectrum(self):
        self.assertEqual(solve_xi0_prolate(0.5), 0.0)
        self.assertEqual(solve_xi0_prolate(0.5, full_output=True), (0.0, False))

    def test_cap(self):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter('always')
            xi0, capped = solve_xi0_prolate(1e-6, full_output=True)
        self.assertTrue(capped)
        self.assertEqual(xi0, 1e4)
        self.assertTrue(any(issubclass(w.category, NearSingularWarning) for w in caught))

    def test_domain(self):
        for lam in (0.0, -0.1, 0.6):
            with self.assertRaises(DomainError):
                solve_xi0_prolate(lam)
            with self.assertRaises(DomainError):
                solve_xi0_flat(lam)

    def test_flat(self):
        for lam in (0.5, 0.2, 1e-3):
            xi0 = solve_xi0_flat(lam)
            self.assertAlmostEqual(0.5 * math.exp(-4.0 * math.pi * xi0), lam, places=14)
            self.assertAlmostEqual(two_sheet_symbol(xi0, 'even'), lam, places=14)
        self.assertEqual(solve_xi0_flat(0.5), 0.0)


class PoissonTest(TestCase):
    def test_disk_mass(self):
        for t, rho in [(2.0, 1.0), (2.0, 10.0), (0.5, 3.0)]:
            value, _ = integrate.quad(lambda r: 2.0 * math.pi * r * poisson_kernel(t, r), 0.0, rho, epsabs=1e-13)
            self.assertAlmostEqual(value, 1.0 - t / math.hypot(rho, t), places=11)

    def test_planar_points(self):
        points = np.array([[3.0, 4.0], [0.0, 0.0]])
        self.assertAllClose(poisson_kernel(2.0, points), [poisson_kernel(2.0, 5.0), 1.0 / (8.0 * math.pi)],
                            rtol=1e-15)
        with self.assertRaises(DomainError):
            poisson_kernel(2.0, np.zeros((2, 3)))

    def test_hat(self):
        self.assertEqual(poisson_hat(2.0, 0.0), 1.0)
        self.assertAlmostEqual(poisson_hat(2.0, np.array([0.3, 0.4])), math.exp(-2.0 * math.pi), places=15)
        with self.assertRaises(DomainError):
            poisson_hat(0.0, 1.0)

    def test_two_sheet_symbol(self):
        self.assertEqual(two_sheet_symbol(0.0, 'even'), 0.5)
        self.assertEqual(two_sheet_symbol(0.0, 'odd'), -0.5)
        xi = np.array([[0.1, 0.0], [0.0, 0.2]])
        self.assertAllClose(two_sheet_symbol(xi, 'odd'), -0.5 * np.exp(-4.0 * math.pi * np.array([0.1, 0.2])))
        with self.assertRaises(DomainError):
            two_sheet_symbol(0.1, 'mixed')

    def test_radial_magnitudes(self):
        xi = np.linspace(0.0, 1.0, 5)
        expected = 0.5 * np.exp(-4.0 * math.pi * xi)
        self.assertAllClose(two_sheet_symbol(xi, 'even', radial=True), expected, rtol=1e-13)
        self.assertAllClose(two_sheet_symbol(-xi, 'odd', radial=True), -expected, rtol=1e-13)
        self.assertAllClose(poisson_hat(2.0, xi.reshape(5, 1), radial=True), 2.0 * expected.reshape(5, 1),
                            rtol=1e-13)
        # a pair of numbers is one planar frequency unless read as magnitudes
        self.assertEqual(two_sheet_symbol([0.3, 0.4], 'even', radial=True).shape, (2,))
        self.assertAlmostEqual(two_sheet_symbol([0.3, 0.4], 'even'), 0.5 * math.exp(-2.0 * math.pi), places=15)
        with self.assertRaises(DomainError):
            two_sheet_symbol(xi, 'even')


if __name__ == '__main__':
    unittest.main()
