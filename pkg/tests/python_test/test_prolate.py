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

from npspec import DomainError, NearSingularWarning, RangeError
from npspec.prolate import (ProlateShape, attainable_range, eigenvalue, enumerate_spectrum,
                            half_property_defect, l_to_r, r_to_l, sphere_eigenvalue, tune_L)
from npspec.results import ModeIndex, nearest_distance
from npspec.specfun import legendre_pq_product_derivative

L_GRID = (1.01, 1.5, 2.0, 10.0)


def lambda_01(L):
    """Closed form of lambda_{0,1} from P_1 Q_1 = L^2/2 log((L+1)/(L-1)) - L."""
    return -0.5 * ((L * L - 1) * L * math.log((L + 1) / (L - 1)) - 2 * L * L + 1)


class TestCase(unittest.TestCase):
    def assertAllClose(self, actual, desired, rtol=1e-7, atol=0.0):
        np.testing.assert_allclose(actual, desired, rtol=rtol, atol=atol)


class ShapeTest(TestCase):
    def test_known_pair(self):
        self.assertAlmostEqual(l_to_r(2 / math.sqrt(3)), 2.0, places=12)
        self.assertAlmostEqual(ProlateShape.from_R(2.0).L, 2 / math.sqrt(3), places=14)

    def test_involution(self):
        for x in (1.05, 1.5, 2.0, 10.0):
            self.assertAlmostEqual(r_to_l(l_to_r(x)) / x, 1.0, places=14)

    def test_sphere_limit(self):
        self.assertAlmostEqual(l_to_r(1e8), 1.0, places=12)
        self.assertEqual(l_to_r(math.inf), 1.0)

    def test_domain(self):
        with self.assertRaises(DomainError):
            l_to_r(1.0)
        with self.assertRaises(DomainError):
            r_to_l(0.5)


class EigenvalueTest(TestCase):
    def test_closed_form_degree_one(self):
        for L in L_GRID:
            self.assertAlmostEqual(eigenvalue((1, 0), L) / lambda_01(L), 1.0, places=12)

    def test_formula(self):
        for n, m, L in [(3, 2, 1.5), (4, 1, 2.0), (5, 5, 10.0), (2, 0, 1.01)]:
            expected = (-0.5 * (-1) ** m * math.factorial(n - m) / math.factorial(n + m)
                        * (L * L - 1) * legendre_pq_product_derivative(n, m, L))
            self.assertAlmostEqual(eigenvalue((n, m), L) / expected, 1.0, places=11)

    def test_negative_order(self):
        self.assertEqual(eigenvalue((3, -2), 1.5), eigenvalue((3, 2), 1.5))
        self.assertEqual(eigenvalue(ModeIndex(3, -2), 1.5), eigenvalue((3, 2), 1.5))

    def test_endpoint_asymptotics(self):
        ratios = []
        for L in (1.1, 1.01, 1.001):
            gap = L - 1.0
            value = eigenvalue((1, 0), L)
            self.assertLess(value, 0.5)
            ratios.append((0.5 - value) / (gap * abs(math.log(gap))))
        fitted = max(ratios)
        self.assertLess(fitted, 2.0)
        self.assertTrue(all(0 < r <= fitted for r in ratios))

    def test_near_singular_warning(self):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter('always')
            value = eigenvalue((2, 0), 1.0 + 1e-10)
        self.assertTrue(any(issubclass(w.category, NearSingularWarning) for w in caught))
        self.assertAlmostEqual(value, 0.5, places=7)

    def test_sphere_degeneracy(self):
        for n in range(1, 6):
            for m in range(n + 1):
                self.assertAlmostEqual(eigenvalue((n, m), 1e4), sphere_eigenvalue(n), delta=1e-6)

    def test_positive(self):
        for L in L_GRID + (1.0001, 1e3):
            for n in range(1, 8):
                for m in range(n + 1):
                    self.assertGreater(eigenvalue((n, m), L), 0.0)

    def test_continuity(self):
        L = 1.0 + np.logspace(-4, 3, 200)
        for mode in [(1, 0), (2, 1), (4, 2)]:
            steps = np.abs(np.diff([eigenvalue(mode, x) for x in L]))
            for i in range(1, steps.size - 1):
                self.assertLessEqual(steps[i], 10 * max(steps[i - 1], steps[i + 1]) + 1e-12)

    def test_invalid_mode(self):
        with self.assertRaises(DomainError):
            eigenvalue((0, 0), 2.0)
        with self.assertRaises(DomainError):
            eigenvalue((1, 2), 2.0)
        with self.assertRaises(DomainError):
            eigenvalue((1, 0), 0.9)


class HalfPropertyTest(TestCase):
    def test_defect_vanishes(self):
        for L in L_GRID:
            for n in range(1, 11):
                self.assertLess(abs(half_property_defect(n, L)), 1e-10, (n, L))

    def test_sphere(self):
        self.assertAlmostEqual(half_property_defect(1, 1e4), 0.0, places=10)

    def test_degree_five(self):
        self.assertLess(abs(half_property_defect(5, 2.0)), 1e-10)


class TuneTest(TestCase):
    def test01_interior_target(self):
        L = tune_L((1, 0), 0.3)
        self.assertLess(abs(eigenvalue((1, 0), L) - 0.3), 1e-10)

    def test02_near_sphere_target(self):
        L = tune_L((1, 0), 1.0 / 6 + 1e-6)
        self.assertGreater(L, 100.0)
        self.assertLess(abs(eigenvalue((1, 0), L) - (1.0 / 6 + 1e-6)), 1e-10)

    def test03_nonzero_order(self):
        L = tune_L((2, 1), 0.05)
        self.assertLess(abs(eigenvalue((2, 1), L) - 0.05), 1e-10)
        L = tune_L((1, 1), 1.0 / 6)
        self.assertLess(abs(eigenvalue((1, 1), L) - 1.0 / 6), 1e-10)

    def test04_unattainable(self):
        with self.assertRaises(RangeError) as ctx:
            tune_L((1, 1), 0.4)
        self.assertIn('attainable', str(ctx.exception))
        with self.assertRaises(RangeError):
            tune_L((1, 0), 0.1)

    def test05_ranges(self):
        self.assertEqual(attainable_range((1, 0)), (1.0 / 6, 0.5, False))
        self.assertEqual(attainable_range((2, -1)), (0.0, 0.1, True))

    def test06_targets_across_degrees(self):
        for mode, target in [((2, 0), 0.3), ((3, 0), 0.12), ((2, 0), 0.45), ((3, 2), 0.06)]:
            L = tune_L(mode, target)
            self.assertGreater(L, 1.0)
            self.assertLess(abs(eigenvalue(mode, L) - target), 1e-10, (mode, target))

    def test07_solver_failure(self):
        with mock.patch('npspec.prolate.optimize.brentq', side_effect=RuntimeError('failed to converge')):
            with self.assertRaises(DomainError) as ctx:
                tune_L((1, 0), 0.3)
        self.assertIsInstance(ctx.exception.__cause__, RuntimeError)
        self.assertIn('lambda_{0,1}', str(ctx.exception))


class EnumerateTest(TestCase):
    def test_sphere_multiplicities(self):
        spectrum = enumerate_spectrum(1e4, 3)
        values = spectrum.expanded()
        self.assertEqual(values.size, 15)
        self.assertAllClose(values, [1 / 6] * 3 + [1 / 10] * 5 + [1 / 14] * 7, atol=1e-6)

    def test_sorted_and_labelled(self):
        spectrum = enumerate_spectrum(1.5, 6)
        self.assertTrue(np.all(np.diff(spectrum.real) <= 0))
        self.assertEqual(len(spectrum), 27)
        self.assertIn('n=1,m=0', spectrum.labels)
        self.assertEqual(spectrum.geometry.family, 'prolate')
        self.assertAlmostEqual(spectrum.geometry.R, l_to_r(1.5), places=14)

    def test_half_property_sum(self):
        values = enumerate_spectrum(2.0, 1).expanded()
        self.assertEqual(values.size, 3)
        self.assertTrue(np.all(values > 0))
        self.assertAlmostEqual(values.sum(), 0.5, places=10)

    def test_coverage(self):
        # log-spaced in L - 1, where lambda moves fastest
        shapes = 1.0 + np.geomspace(1e-3, 9.0, 400)
        collected = np.concatenate([enumerate_spectrum(L, 12).real for L in shapes])
        grid = np.arange(0.02, 0.48 + 1e-9, 0.0025)
        self.assertLess(nearest_distance(collected, grid).max(), 0.005)

    def test_degree_limit(self):
        with self.assertRaises(DomainError):
            enumerate_spectrum(2.0, 51)


if __name__ == '__main__':
    unittest.main()
