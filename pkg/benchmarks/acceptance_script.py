import abc
import math
import os
import time
import logging
import argparse
import multiprocessing

import numpy as np
from scipy import integrate

import npspec
from npspec.limits import l0_hat, l0_hat_direct
from npspec.plasmon import dielectric_for_eigenvalue, eigenvalue_for_dielectric
from npspec.prolate import eigenvalue, half_property_defect, r_to_l, sphere_eigenvalue, tune_L
from npspec.quasimode import QuasiModeSpec, residual_flat, residual_prolate
from npspec.results import nearest_distance
from npspec.spectra import density_scan, discretize_prolate, eigenvalues
from npspec.specfun import khat


RESULT_DIR = './result'


logging.basicConfig(format='%(message)s')
acceptance_logger = logging.getLogger("npspec_acceptance")
acceptance_logger.setLevel(logging.INFO)


class BaseCheck(object):
    """One acceptance run: ``run`` returns (passed, detail)."""
    name = None
    budget = None  # seconds

    @abc.abstractmethod
    def run(self):
        pass

    def __str__(self):
        return self.name


class SphereSpectrum(BaseCheck):
    name = 'sphere'
    budget = 30

    def run(self):
        spectrum = eigenvalues(discretize_prolate(1.0, 200)).check_bounds()
        errors = [abs(spectrum.real[n] - sphere_eigenvalue(n)) for n in range(6)]
        return max(errors) < 1e-4, 'max error %.3g' % max(errors)


class AnalyticCrossCheck(BaseCheck):
    name = 'prolate-cross'

    def run(self):
        L = r_to_l(2.0)
        spectrum = eigenvalues(discretize_prolate(2.0, 400)).check_bounds()
        analytic = [eigenvalue((n, 0), L) for n in range(1, 6)]
        worst = float(np.max(nearest_distance(spectrum.real, analytic)))
        return worst < 1e-3, 'max distance %.3g' % worst


class HalfProperty(BaseCheck):
    name = 'half-property'
    budget = 1

    def run(self):
        worst = max(abs(half_property_defect(n, L)) for n in range(1, 11) for L in (1.01, 1.5, 2.0, 10.0))
        return worst < 1e-10, 'max defect %.3g' % worst


class EndpointAsymptotics(BaseCheck):
    name = 'endpoint'

    def run(self):
        ratios = [(0.5 - eigenvalue((1, 0), L)) / ((L - 1.0) * abs(math.log(L - 1.0)))
                  for L in (1.1, 1.01, 1.001)]
        return all(0 < r < 2.0 for r in ratios), 'C = %.4g' % max(ratios)


class SymbolFacts(BaseCheck):
    name = 'symbols'

    def run(self):
        values = l0_hat(np.linspace(0.0, 10.0, 50))
        decreasing = bool(np.all(np.diff(values) < 0))
        top = abs(l0_hat(0.0) - 0.5)
        khat_error = 0.0
        for xi in np.linspace(0.1, 5.0, 8):
            direct, _ = integrate.quad(lambda t: (1.0 + t * t) ** -1.5, 0.0, np.inf,
                                       weight='cos', wvar=2.0 * math.pi * xi)
            khat_error = max(khat_error, abs(khat(xi) - 2.0 * direct))
        routes = max(abs(l0_hat(xi) - l0_hat_direct(xi)) for xi in (0.1, 1.0, 3.0))
        passed = decreasing and top < 1e-8 and khat_error < 1e-8 and routes < 1e-6
        return passed, 'l0(0) error %.3g, khat error %.3g, l0 routes %.3g, decreasing %s' % (
            top, khat_error, routes, decreasing)


class ProlateQuasiMode(BaseCheck):
    name = 'prolate-quasimode'
    budget = 300

    def run(self):
        values = [residual_prolate(QuasiModeSpec.create('prolate', 0.3, 0.5, R)).value for R in (1e2, 1e3, 1e4)]
        passed = all(b < a for a, b in zip(values, values[1:])) and values[-1] < 0.05
        return passed, 'residuals %s' % ', '.join('%.4g' % v for v in values)


class OblateDensity(BaseCheck):
    name = 'oblate-density'
    budget = 600

    def run(self):
        grid = [round(0.05 * k, 2) for k in range(-9, 10)]
        report = density_scan('oblate', [5.0, 10.0, 20.0, 40.0], grid, 0.02, m_max=8)
        odd = report.count_below(-0.05, R=20.0, parity='odd')
        passed = report.all_covered and odd >= 3
        return passed, 'uncovered %s, odd below -0.05 at R=20: %d' % (report.uncovered(), odd)


class FlatQuasiMode(BaseCheck):
    name = 'flat-quasimode'

    def run(self):
        R_list = (1e2, 1e3, 1e4)
        reports = [residual_flat(QuasiModeSpec.create('flat', -0.3, 0.3, R)) for R in R_list]
        sheet = [r.parts['sheet'] for r in reports]
        walls = [r.parts['sidewall'] for r in reports]
        slope = float(np.polyfit(np.log(R_list), np.log(walls), 1)[0])
        passed = all(b < a for a, b in zip(sheet, sheet[1:])) and slope <= -1.0
        return passed, 'sheet %s, side-wall slope %.3f' % (', '.join('%.4g' % v for v in sheet), slope)


class Tuner(BaseCheck):
    name = 'tune'

    def run(self):
        L = tune_L((1, 0), 0.3)
        residual = abs(eigenvalue((1, 0), L) - 0.3)
        return residual < 1e-10, 'L = %.12g, residual %.3g' % (L, residual)


class PlasmonRoundTrip(BaseCheck):
    name = 'plasmon'

    def run(self):
        worst = max(abs(eigenvalue_for_dielectric(dielectric_for_eigenvalue(lam)) - lam)
                    for lam in np.linspace(-0.49, 0.49, 100))
        dipole = dielectric_for_eigenvalue(1.0 / 6.0)
        return worst < 1e-12 and abs(dipole + 2.0) < 1e-12, 'max error %.3g, k(1/6) = %r' % (worst, dipole)


CHECKS = [SphereSpectrum(), AnalyticCrossCheck(), HalfProperty(), EndpointAsymptotics(), SymbolFacts(),
          ProlateQuasiMode(), OblateDensity(), FlatQuasiMode(), Tuner(), PlasmonRoundTrip()]


def run_check(args, check, results_fn):
    acceptance_logger.info('check: {0}'.format(check))
    t0 = time.time()
    try:
        passed, detail = check.run()
    except npspec.NPSpecError as e:
        passed, detail = False, '%s: %s' % (type(e).__name__, e)
    wall_clock = time.time() - t0
    if check.budget is not None and wall_clock > check.budget:
        acceptance_logger.warning('%s took %.1f s, budget %d s' % (check, wall_clock, check.budget))

    output = '\t'.join(map(str, [check.name, npspec.__version__, '%.3f' % wall_clock,
                                 'PASS' if passed else 'FAIL', detail]))
    with open(results_fn, 'a') as f:
        f.write(output + '\n')

    acceptance_logger.info('Summary: {0}\n'.format(output))


def run(args):
    results_fn = os.path.join(RESULT_DIR, 'acceptance_%s.txt' % npspec.__version__)
    checks = [c for c in CHECKS if not args.check or c.name in args.check]
    acceptance_logger.debug('order: %s' % str([c.name for c in checks]))

    for check in checks:
        # Spawn a subprocess to force the memory to be reclaimed at the end
        p = multiprocessing.Process(target=run_check, args=(args, check, results_fn))
        p.start()
        p.join()


if __name__ == '__main__':
    parser = argparse.ArgumentParser()
    parser.add_argument('--check', help='Run only these checks', nargs='*', choices=[c.name for c in CHECKS])
    parser.add_argument('--verbose', '-v', help='Print verbose log', action='store_true')
    args = parser.parse_args()

    if not os.path.exists(RESULT_DIR):
        os.makedirs(RESULT_DIR)

    if args.verbose:
        acceptance_logger.setLevel(logging.DEBUG)
        npspec.npspec_logger.setLevel(logging.DEBUG)
    else:
        npspec.npspec_logger.setLevel(logging.INFO)

    run(args)
