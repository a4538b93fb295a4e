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

"""npspec command line: analytic spectra, Nystrom runs, quasi-modes and plasmon tables.

Plot data is written as CSV (or JSON with ``--format json``), structured
results as JSON and short reports as text tables. NPSpecError and argument
errors exit with status 2; ``--check`` turns failed calibration checks into
status 1.
"""

import argparse
import csv
import json
import logging
import math
import sys
import time

import numpy as np
from tabulate import tabulate

from npspec import NPSpecError, npspec_logger
from npspec.cache import SpectrumCache, SpectrumCacheRecord, spectrum_key
from npspec.config import OUTPUT_FORMATS, RunConfig
from npspec.errors import DomainError
from npspec.limits import l0_hat, l0_hat_direct, two_sheet_symbol
from npspec.plasmon import (ResonancePair, dielectric_for_eigenvalue, eigenvalue_for_dielectric, resonance_table,
                            sort_pairs, sphere_resonances)
from npspec.prolate import eigenvalue, half_property_defect, r_to_l, sphere_eigenvalue, tune_L
from npspec.quasimode import QuasiModeSpec, residual_flat, residual_oblate, residual_prolate
from npspec.results import SpectrumResult
from npspec.spectra import (OBLATE_SCHEME, PARITIES, PROLATE_SCHEMES, density_scan, discretize_oblate,
                            discretize_prolate, eigenvalues, oblate_geometry, prolate_geometry)

logger = logging.getLogger(__name__)

TABLE_FLOATFMT = '.17g'


def float_list(text):
    try:
        values = [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma separated numbers, got %r' % (text,))
    if not values:
        raise argparse.ArgumentTypeError('empty list')
    return values


def _plain(value):
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def _cell(value):
    value = _plain(value)
    return repr(value) if isinstance(value, float) else value


def write_json(out, payload):
    out.write(json.dumps(payload, sort_keys=True, indent=1) + '\n')


def emit(out, fmt, headers, rows):
    """Rows as CSV (with header), a JSON list of objects or a text table."""
    if fmt == 'json':
        write_json(out, [dict(zip(headers, map(_plain, row))) for row in rows])
    elif fmt == 'table':
        out.write(tabulate(rows, headers=headers, floatfmt=TABLE_FLOATFMT) + '\n')
    else:
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(headers)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def _data_format(args, config):
    return args.format or config.output_format


# -- analytic prolate --------------------------------------------------------

def cmd_prolate_eigs(args, config, out):
    if args.nmax < 1:
        raise DomainError('--nmax must be positive, got %d' % args.nmax)
    L = args.L if args.L is not None else r_to_l(args.R)
    rows = [(n, m, eigenvalue((n, m), L)) for n in range(1, args.nmax + 1) for m in range(n + 1)]
    emit(out, _data_format(args, config), ['n', 'm', 'lambda'], rows)
    return 0


def cmd_half_property(args, config, out):
    if args.nmax < 1:
        raise DomainError('--nmax must be positive, got %d' % args.nmax)
    rows = [(n, half_property_defect(n, args.L)) for n in range(1, args.nmax + 1)]
    emit(out, args.format or 'table', ['n', 'defect'], rows)
    return 0


def cmd_tune(args, config, out):
    L = tune_L((args.n, args.m), args.target)
    achieved = eigenvalue((args.n, args.m), L)
    emit(out, args.format or 'table', ['n', 'm', 'target', 'L', 'lambda', 'residual'],
         [(args.n, args.m, args.target, L, achieved, abs(achieved - args.target))])
    return 0


def cmd_limit_symbol(args, config, out):
    if args.steps < 2 or not args.xi_max > 0:
        raise DomainError('need --steps >= 2 and --xi-max > 0')
    xi = np.linspace(0.0, args.xi_max, args.steps)
    if args.which == 'poisson':
        symbol = two_sheet_symbol(xi, 'even', radial=True)
    elif args.direct:
        symbol = [l0_hat_direct(x, epsabs=config.quad_epsabs, limit=config.quad_limit) for x in xi]
    else:
        symbol = l0_hat(xi, order=config.theta_panel_points)
    emit(out, _data_format(args, config), ['xi', 'symbol'], list(zip(xi, symbol)))
    return 0


# -- Nystrom -----------------------------------------------------------------

def cmd_sphere_check(args, config, out):
    start = time.time()
    spectrum = eigenvalues(discretize_prolate(1.0, args.N, args.scheme))
    spectrum.check_bounds()
    rows = []
    for n in range(min(args.count, len(spectrum))):
        exact = sphere_eigenvalue(n)
        rows.append((n, spectrum.real[n], exact, abs(spectrum.real[n] - exact)))
    worst = max(row[3] for row in rows)
    emit(out, args.format or 'table', ['n', 'nystrom', 'exact', 'abs_error'], rows)
    logger.info('sphere check N=%d: max abs error %.3g (%.1f s)', args.N, worst, time.time() - start)
    return 0 if worst < args.tol else 1


def cmd_discretize(args, config, out):
    N = args.N or config.default_n
    if args.family == 'prolate':
        geometry, scheme, mode, parity = prolate_geometry(args.R), args.scheme, 0, None
    else:
        a = args.a or config.oblate_a
        geometry, scheme, mode, parity = oblate_geometry(args.R, a), OBLATE_SCHEME, args.m, args.parity
    key = spectrum_key(geometry, N, scheme, mode, parity)
    cache = SpectrumCache(config.cache_dir)
    record = None if args.no_cache else cache.get(key)
    if record is None:
        start = time.time()
        if args.family == 'prolate':
            op = discretize_prolate(args.R, N, scheme)
        else:
            op = discretize_oblate(args.R, a, mode, parity, N)
        spectrum = eigenvalues(op).check_bounds()
        record = SpectrumCacheRecord.from_spectrum(spectrum, time.time() - start)
        logger.info('%s: %d eigenvalues in %.1f s', spectrum.describe(), len(spectrum), record.wall_clock)
        if not args.no_cache:
            cache.put(record)
    write_json(out, record.to_spectrum().to_dict())
    return 0


def cmd_density_scan(args, config, out):
    family = args.family
    R_list = args.r_list or getattr(config, '%s_r_list' % family)
    grid = args.lambda_grid or getattr(config, '%s_lambda_grid' % family)
    report = density_scan(family, R_list, grid, args.eps or config.eps, N=args.N or config.default_n,
                          m_max=config.m_max if args.m_max is None else args.m_max,
                          parities=config.parities, a=args.a or config.oblate_a)
    payload = report.to_dict()
    passed = report.all_covered
    if not passed:
        logger.warning('uncovered targets: %s', report.uncovered())
    if family == 'oblate' and 'odd' in config.parities:
        counts = {repr(float(R)): report.count_below(config.odd_negative_level, R=R, parity='odd') for R in R_list}
        payload['odd_below_level'] = {'level': config.odd_negative_level, 'required': config.odd_negative_count,
                                      'counts': counts}
        if max(counts.values()) < config.odd_negative_count:
            logger.warning('no R has %d odd eigenvalues below %g: %s',
                           config.odd_negative_count, config.odd_negative_level, counts)
            passed = False
    write_json(out, payload)
    return 1 if args.check and not passed else 0


# -- quasi-modes ---------------------------------------------------------------

def cmd_quasimode(args, config, out):
    a = args.a or config.oblate_a
    reports = []
    for R in args.r_list:
        spec = QuasiModeSpec.create(args.family, args.lam, args.sigma, R, a=a, xi0_cap=config.xi0_cap)
        if args.family == 'prolate':
            reports.append(residual_prolate(spec))
        elif args.family == 'oblate':
            reports.append(residual_oblate(spec, pair_budget=config.pair_budget))
        else:
            reports.append(residual_flat(spec))

    headers = ['R', 'rho', 'residual']
    rows = [[r.R, r.rho, r.value] for r in reports]
    if args.family == 'flat':
        headers.append('sidewall')
        for row, r in zip(rows, reports):
            row.append(r.parts['sidewall'])
    emit(out, _data_format(args, config), headers, rows)

    failures = []
    values = [r.value for r in reports]
    if any(later >= earlier for earlier, later in zip(values, values[1:])):
        failures.append('residual does not decrease over R = %s: %s' % (list(args.r_list), values))
    if args.family == 'prolate' and values[-1] >= config.prolate_residual_threshold:
        failures.append('final residual %.4g not below %g' % (values[-1], config.prolate_residual_threshold))
    if args.family == 'flat' and len(reports) > 1:
        walls = [r.parts['sidewall'] for r in reports]
        slope = float(np.polyfit(np.log(args.r_list), np.log(walls), 1)[0])
        logger.info('side-wall slope %.3f', slope)
        if slope > config.sidewall_slope_max:
            failures.append('side-wall slope %.3f above %g' % (slope, config.sidewall_slope_max))
    for failure in failures:
        logger.warning(failure)
    return 1 if args.check and failures else 0


# -- plasmon -----------------------------------------------------------------

def _load_spectrum(path):
    with open(path) as f:
        text = f.read()
    try:
        payload = json.loads(text)
    except ValueError as e:
        raise DomainError('%s is not a JSON spectrum: %s' % (path, e))
    if 'schema_version' in payload:
        return SpectrumCacheRecord.loads(text, source=path).to_spectrum()
    try:
        return SpectrumResult.from_dict(payload)
    except (KeyError, TypeError, ValueError) as e:
        raise DomainError('%s is not a spectrum file: %s' % (path, e))


def cmd_plasmon(args, config, out):
    if args.spectrum_file:
        pairs = resonance_table(_load_spectrum(args.spectrum_file))
    elif args.k:
        pairs = [ResonancePair(eigenvalue_for_dielectric(k), k) for k in args.k]
    elif args.sphere:
        pairs = sphere_resonances(args.sphere)
    else:
        pairs = [ResonancePair(lam, dielectric_for_eigenvalue(lam)) for lam in args.lam]
    emit(out, args.format or 'table', ['label', 'lambda', 'k'], [pair.as_row() for pair in sort_pairs(pairs)])
    return 0


# -- parser ------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='key = value configuration file')
    common.add_argument('--cache-dir', help='spectrum cache directory (default $NPSPEC_CACHE_DIR or ./cache)')
    common.add_argument('--format', choices=OUTPUT_FORMATS + ('table',), help='output format')
    common.add_argument('--output', help='write to this file instead of stdout')
    common.add_argument('-v', '--verbose', action='store_true', help='debug logging')

    parser = argparse.ArgumentParser(prog='npspec', description=__doc__.split('\n')[0])
    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    p = sub.add_parser('prolate-eigs', parents=[common], help='analytic prolate eigenvalues (n, m, lambda)')
    shape = p.add_mutually_exclusive_group(required=True)
    shape.add_argument('--L', type=float, help='spheroidal coordinate of the surface, > 1')
    shape.add_argument('--R', type=float, help='aspect ratio, > 1')
    p.add_argument('--nmax', type=int, required=True)
    p.set_defaults(handler=cmd_prolate_eigs)

    p = sub.add_parser('sphere-check', parents=[common], help='Nystrom sphere spectrum against 1/(4n+2)')
    p.add_argument('--N', type=int, default=200)
    p.add_argument('--count', type=int, default=6)
    p.add_argument('--tol', type=float, default=1e-4)
    p.add_argument('--scheme', choices=PROLATE_SCHEMES, default='product')
    p.set_defaults(handler=cmd_sphere_check)

    p = sub.add_parser('half-property', parents=[common], help='sum over m of lambda_{m,n}(L) minus 1/2')
    p.add_argument('--L', type=float, required=True)
    p.add_argument('--nmax', type=int, required=True)
    p.set_defaults(handler=cmd_half_property)

    p = sub.add_parser('tune', parents=[common], help='find L with lambda_{m,n}(L) = target')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--m', type=int, required=True)
    p.add_argument('--target', type=float, required=True)
    p.set_defaults(handler=cmd_tune)

    p = sub.add_parser('limit-symbol', parents=[common], help='plot data of a limit symbol')
    p.add_argument('--which', choices=('l0', 'poisson'), required=True)
    p.add_argument('--xi-max', type=float, required=True)
    p.add_argument('--steps', type=int, required=True)
    p.add_argument('--direct', action='store_true', help='l0 by direct cosine transform')
    p.set_defaults(handler=cmd_limit_symbol)

    p = sub.add_parser('discretize', parents=[common], help='Nystrom spectrum as JSON, cached')
    p.add_argument('--family', choices=('prolate', 'oblate'), required=True)
    p.add_argument('--R', type=float, required=True)
    p.add_argument('--a', type=float)
    p.add_argument('--m', type=int, default=0)
    p.add_argument('--parity', choices=PARITIES, default='even')
    p.add_argument('--N', type=int)
    p.add_argument('--scheme', choices=PROLATE_SCHEMES, default='product')
    p.add_argument('--no-cache', action='store_true')
    p.set_defaults(handler=cmd_discretize)

    p = sub.add_parser('density-scan', parents=[common], help='coverage of a lambda grid by computed spectra')
    p.add_argument('--family', choices=('prolate', 'oblate'), required=True)
    p.add_argument('--r-list', type=float_list)
    p.add_argument('--lambda-grid', type=float_list)
    p.add_argument('--eps', type=float)
    p.add_argument('--N', type=int)
    p.add_argument('--m-max', type=int)
    p.add_argument('--a', type=float)
    p.add_argument('--check', action='store_true', help='exit 1 when a calibration check fails')
    p.set_defaults(handler=cmd_density_scan)

    p = sub.add_parser('quasimode', parents=[common], help='quasi-mode residuals over a list of R')
    p.add_argument('--family', choices=('prolate', 'oblate', 'flat'), required=True)
    p.add_argument('--lambda', dest='lam', type=float, required=True)
    p.add_argument('--sigma', type=float, required=True)
    p.add_argument('--r-list', type=float_list, required=True)
    p.add_argument('--a', type=float)
    p.add_argument('--check', action='store_true', help='exit 1 when a calibration check fails')
    p.set_defaults(handler=cmd_quasimode)

    p = sub.add_parser('plasmon', parents=[common], help='dielectric constants of NP eigenvalues')
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument('--lambda', dest='lam', type=float, nargs='+')
    source.add_argument('--k', type=float, nargs='+')
    source.add_argument('--spectrum-file')
    source.add_argument('--sphere', type=int, metavar='NMAX')
    p.set_defaults(handler=cmd_plasmon)
    return parser


def main(argv=None, out=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(format='%(message)s')
    npspec_logger.setLevel(logging.DEBUG if args.verbose else logging.INFO)
    out = out or sys.stdout
    try:
        config = RunConfig.load(args.config) if args.config else RunConfig()
        config = config.override(cache_dir=args.cache_dir)
        if args.output:
            with open(args.output, 'w') as f:
                return args.handler(args, config, f)
        return args.handler(args, config, out)
    except (NPSpecError, OSError) as e:
        sys.stderr.write('npspec: error: %s\n' % (e,))
        return 2


if __name__ == '__main__':
    sys.exit(main())
