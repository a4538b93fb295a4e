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

import numpy as np
from scipy import integrate

from npspec import AliasingError, BudgetError, DomainError, ResolutionError
from npspec.kernels import h_kernel
from npspec.limits import solve_xi0_flat, solve_xi0_prolate
from npspec.quadrature import composite_gauss_legendre
from npspec.quasimode import (AxialSamples, QuasiModeSpec, apply_h, build_f_rho, build_g_rho, build_phi_rho,
                              build_profiles, fourier_concentration, gagliardo_norm, h_half_norm,
                              limit_residual_prolate, residual_flat, residual_oblate, residual_prolate,
                              smooth_step)


def bump(x, half_width):
    t = np.asarray(x, dtype=float) / half_width
    out = np.zeros(t.shape)
    inside = np.abs(t) < 1
    out[inside] = np.exp(-1.0 / (1.0 - t[inside] ** 2))
    return out


class TestCase(unittest.TestCase):
    def assertAllClose(self, actual, desired, rtol=1e-7, atol=0.0):
        np.testing.assert_allclose(actual, desired, rtol=rtol, atol=atol)

    def assertArrayEqual(self, actual, desired):
        np.testing.assert_array_equal(actual, desired)


class ProfileTest(TestCase):
    def test_zeta_hat_mass(self):
        line = build_profiles(1)
        plane = build_profiles(2)
        value, _ = integrate.quad(lambda t: float(line.zeta_hat(t)), -1.0, 1.0, epsabs=1e-14)
        self.assertAlmostEqual(value, 1.0, places=10)
        value, _ = integrate.quad(lambda r: 2.0 * math.pi * r * float(plane.zeta_hat_radial(r)), 0.0, 1.0,
                                  epsabs=1e-14)
        self.assertAlmostEqual(value, 1.0, places=10)
        self.assertEqual(float(line.zeta_hat(1.0)), 0.0)

    def test_zeta_at_origin(self):
        # zeta(0) is the mass of its transform
        self.assertAlmostEqual(float(build_profiles(1).zeta(0.0)), 1.0, places=10)
        self.assertAlmostEqual(float(build_profiles(2).zeta(np.zeros(2))), 1.0, places=10)

    def test_zeta_real_even(self):
        line = build_profiles(1)
        x = np.array([0.1, 0.35, 0.8])
        self.assertArrayEqual(line.zeta(x), line.zeta(-x))
        self.assertFalse(np.iscomplexobj(line.zeta(x)))
        plane = build_profiles(2)
        self.assertAlmostEqual(float(plane.zeta(np.array([0.3, 0.4]))), float(plane.zeta_radial(0.5)), places=14)

    def test_cutoff(self):
        line = build_profiles(1)
        self.assertArrayEqual(line.chi(np.array([0.0, 0.3, -0.5])), 1.0)
        self.assertArrayEqual(line.chi(np.array([1.0, -1.2, 3.0])), 0.0)
        self.assertAlmostEqual(float(line.chi(0.75)), 0.5, places=14)
        self.assertAlmostEqual(float(line.chi(1.5, radius=2.0)), 0.5, places=14)
        steps = smooth_step(np.linspace(-0.5, 1.5, 41))
        self.assertTrue(np.all(np.diff(steps) >= 0))

    def test_envelope_transform(self):
        line = build_profiles(1)
        value, _ = integrate.quad(lambda x: 2.0 * float(line.envelope(x)), 0.0, 1.0, epsabs=1e-13)
        self.assertAlmostEqual(float(line.envelope_hat(0.0)), value, places=9)
        eta = np.linspace(0.0, 10.0, 41)
        decay = np.abs(line.envelope_hat(eta))
        self.assertLess(decay[-1], 1e-2 * decay[0])

    def test_invalid_dimension(self):
        with self.assertRaises(DomainError):
            build_profiles(3)
        with self.assertRaises(DomainError):
            build_profiles(2).zeta(np.zeros(3))


class QuasiModeSpecTest(TestCase):
    def test_prolate(self):
        spec = QuasiModeSpec.create('prolate', 0.3, 0.5, 400.0)
        self.assertEqual(spec.xi0, solve_xi0_prolate(0.3))
        self.assertAlmostEqual(spec.rho, 20.0, places=12)
        self.assertEqual(spec.support_radius, spec.rho)
        self.assertEqual(spec.parity, 'even')

    def test_planar(self):
        spec = QuasiModeSpec.create('flat', -0.3, 0.3, 10.0)
        self.assertEqual(spec.xi0, solve_xi0_flat(0.3))
        self.assertEqual(spec.parity, 'odd')
        self.assertAlmostEqual(spec.support_radius, 0.5 * 10.0 ** 0.7, places=12)
        oblate = QuasiModeSpec.create('oblate', 0.2, 0.3, 10.0, a=2.0)
        self.assertAlmostEqual(oblate.support_radius, 2.0 * oblate.rho, places=12)
        self.assertEqual(oblate.domain_radius, 20.0)

    def test_invalid(self):
        bad = [('prolate', -0.3, 0.5, 100.0), ('prolate', 0.3, 1.0, 100.0), ('oblate', 0.0, 0.5, 100.0),
               ('flat', 0.6, 0.5, 100.0), ('flat', 0.3, 0.5, 1.0), ('torus', 0.3, 0.5, 100.0)]
        for args in bad:
            with self.assertRaises(DomainError, msg=args):
                QuasiModeSpec.create(*args)
        with self.assertRaises(DomainError):
            QuasiModeSpec.create('prolate', 0.3, 0.5, 4.0, cutoff=2.0)


class AxialTest(TestCase):
    def test_norm_independent_of_rho(self):
        expected = build_profiles(1).envelope_norm()
        for R in (1e2, 1e4, 1e6):
            g = build_g_rho(QuasiModeSpec.create('prolate', 0.3, 0.5, R))
            self.assertAlmostEqual(g.norm() / expected, 1.0, places=8, msg=R)

    def test_support_and_resolution(self):
        spec = QuasiModeSpec.create('prolate', 0.3, 0.5, 100.0)
        g = build_g_rho(spec)
        self.assertTrue(np.all(np.abs(g.x) < spec.rho))
        spacing = np.diff(g.x).max()
        self.assertLess(spacing * spec.xi0, 0.1)
        with self.assertRaises(ResolutionError):
            build_g_rho(QuasiModeSpec.create('prolate', 0.05, 0.5, 100.0), N=32)
        with self.assertRaises(ResolutionError):
            build_g_rho(spec, max_nodes=64)

    def test_top_of_spectrum_is_real(self):
        g = build_g_rho(QuasiModeSpec.create('prolate', 0.5, 0.5, 100.0))
        self.assertFalse(np.iscomplexobj(g.values))

    def test_wrong_family(self):
        with self.assertRaises(DomainError):
            build_g_rho(QuasiModeSpec.create('flat', 0.3, 0.5, 100.0))
        with self.assertRaises(DomainError):
            build_f_rho(QuasiModeSpec.create('prolate', 0.3, 0.5, 100.0))

    def test_fourier_concentration(self):
        spec = QuasiModeSpec.create('prolate', 0.3, 0.5, 400.0)
        g = build_g_rho(spec)
        self.assertGreater(fourier_concentration(g, spec.xi0, 2.0 / spec.rho), 0.95)
        self.assertGreater(fourier_concentration(g, spec.xi0, 10.0 / spec.rho), 0.99)


class ApplyHTest(TestCase):
    def test_against_adaptive_quadrature(self):
        R = 5.0
        edges = np.linspace(-2.0, 2.0, 5)
        x, w = composite_gauss_legendre(edges, 16)
        samples = AxialSamples(x, w, bump(x, 2.0).astype(complex), edges)
        applied = apply_h(R, samples)
        for i in (0, 20, 31, 47):
            def integrand(y, xi=x[i]):
                return h_kernel(R, xi, y, method='elliptic') * float(bump(y, 2.0))
            left, _ = integrate.quad(integrand, -2.0, x[i], epsabs=1e-12, limit=200)
            right, _ = integrate.quad(integrand, x[i], 2.0, epsabs=1e-12, limit=200)
            self.assertLess(abs(applied[i] - (left + right)), 1e-5, msg=i)


class ProlateResidualTest(TestCase):
    def test_limit_residual_decreases(self):
        values = [limit_residual_prolate(0.3, rho) for rho in (10.0, 100.0, 1000.0)]
        self.assertTrue(values[0] > values[1] > values[2], values)
        self.assertLess(values[2], 1e-2)
        self.assertLess(limit_residual_prolate(0.5, 1000.0), 0.05)

    def test_residual_decreases(self):
        reports = [residual_prolate(QuasiModeSpec.create('prolate', 0.3, 0.5, R)) for R in (100.0, 400.0, 1600.0)]
        values = [float(report) for report in reports]
        self.assertTrue(values[0] > values[1] > values[2], values)
        self.assertLess(values[2], 0.1)
        self.assertEqual(reports[2].parts['nodes'], 80 * 16)
        self.assertEqual(reports[0].family, 'prolate')
        for report in reports:
            self.assertGreater(report.parts['limit'], 0.0)


class OblateResidualTest(TestCase):
    @classmethod
    def setUpClass(cls):
        cls.small = residual_oblate(QuasiModeSpec.create('oblate', -0.3, 0.3, 10.0))
        cls.large = residual_oblate(QuasiModeSpec.create('oblate', -0.3, 0.3, 40.0))

    def test_components(self):
        for report in (self.small, self.large):
            self.assertEqual(report.family, 'oblate')
            self.assertAlmostEqual(report.value, report.parts['k1'] + report.parts['k2'], places=14)
            self.assertGreater(report.parts['k1'], 0.0)
            self.assertGreater(report.parts['k2'], 0.0)
            self.assertTrue(math.isfinite(report.value))

    def test_decreases_with_R(self):
        self.assertLess(self.large.value, self.small.value)

    def test_sign_of_lambda(self):
        # the bound only sees |lambda|
        positive = residual_oblate(QuasiModeSpec.create('oblate', 0.3, 0.3, 10.0))
        self.assertAlmostEqual(positive.value, self.small.value, places=12)

    def test_budget(self):
        with self.assertRaises(BudgetError):
            residual_oblate(QuasiModeSpec.create('oblate', -0.3, 0.3, 10.0), pair_budget=1e3)

    def test_wrong_family(self):
        with self.assertRaises(DomainError):
            residual_oblate(QuasiModeSpec.create('flat', -0.3, 0.3, 10.0))


class FlatResidualTest(TestCase):
    @classmethod
    def setUpClass(cls):
        cls.R = (10.0, 20.0, 40.0)
        cls.reports = [residual_flat(QuasiModeSpec.create('flat', -0.3, 0.3, R)) for R in cls.R]

    def test_sheet_residual_decreases(self):
        values = [report.parts['sheet'] for report in self.reports]
        self.assertTrue(values[0] > values[1] > values[2], values)

    def test_side_wall_decay(self):
        walls = [report.parts['sidewall'] for report in self.reports]
        slope = np.polyfit(np.log(self.R), np.log(walls), 1)[0]
        self.assertLessEqual(slope, -1.0)

    def test_physical_space_residual(self):
        # |lambda| + 1/2 bounds lambda phi - K phi since the symbol stays below 1/2
        for report in self.reports:
            self.assertTrue(0.0 < report.parts['sheet_l2'] < 0.8, report.parts)

    def test_norm_stays_bounded(self):
        norms = [report.parts['norm'] for report in self.reports]
        self.assertLess(max(norms) / min(norms), 2.0)

    def test_phi_parity(self):
        even = build_phi_rho(QuasiModeSpec.create('flat', 0.3, 0.3, 10.0))
        odd = build_phi_rho(QuasiModeSpec.create('flat', -0.3, 0.3, 10.0))
        self.assertEqual(even.sign, 1)
        self.assertEqual(odd.sign, -1)
        self.assertArrayEqual(odd.minus.values, -odd.plus.values)

    def test_wrong_family(self):
        with self.assertRaises(DomainError):
            residual_flat(QuasiModeSpec.create('oblate', -0.3, 0.3, 10.0))


class PlanarNormTest(TestCase):
    def test_f_rho_norm(self):
        expected = build_profiles(2).envelope_norm(0.5)
        for R in (10.0, 100.0):
            spec = QuasiModeSpec.create('flat', 0.3, 0.3, R)
            f = build_f_rho(spec, spacing=spec.support_radius / 64)
            self.assertAlmostEqual(f.norm() / expected, 1.0, places=5, msg=R)

    def test_half_norm_dominates_l2(self):
        spec = QuasiModeSpec.create('flat', 0.3, 0.3, 20.0)
        f = build_f_rho(spec)
        self.assertGreaterEqual(h_half_norm(f.values, f.spacing), f.norm() * (1 - 1e-12))
        self.assertEqual(h_half_norm(np.zeros((8, 8)), 0.5), 0.0)

    def test_gagliardo_matches_fourier(self):
        h = 1.0
        axis = (np.arange(32) - 15.5) * h
        x1, x2 = np.meshgrid(axis, axis, indexing='ij')
        gauss = np.exp(-(x1 ** 2 + x2 ** 2) / (2.0 * 4.0 ** 2))
        direct = gagliardo_norm(gauss, h)
        fourier = h_half_norm(gauss, h, weight='gagliardo', edge_tol=1e-3)
        self.assertLess(abs(direct / fourier - 1.0), 0.1)

    def test_aliasing(self):
        with self.assertRaises(AliasingError):
            h_half_norm(np.ones((16, 16)), 0.1)
        with self.assertRaises(DomainError):
            h_half_norm(np.ones(16), 0.1)
        with self.assertRaises(DomainError):
            h_half_norm(np.zeros((4, 4)), 0.1, weight='sobolev')


if __name__ == '__main__':
    unittest.main()
