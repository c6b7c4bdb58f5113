"""Command line entry point: one subcommand per experiment, JSON or CSV reports.

Exit status is 0 when every flag in the report holds, 1 when a check fails
and 2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from . import acceptance, geometry
from .config import rng
from .euclid_graph import NormColoring, build_graph, check_ramanujan_bound, dense_spectrum, spectra_agree
from .ffield import char_table_checksum, field_of_order
from .mixing import PatternGraph, WorkCapExceeded, count_colored_copies, count_colored_stars, full_space_star_identity, mixing_trials
from .report import make_report, render
from .scheme import build_omega, scheme_report
from .simplex import census, congruence_trials, main_theorem_experiment, proof_pipeline, random_subset

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _ints(text):
    try:
        return [int(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected comma-separated integers, got {text!r}')


def _density(text):
    v = float(text)
    if not 0 < v <= 1:
        raise argparse.ArgumentTypeError(f'density must lie in (0, 1], got {text}')
    return v


def _subset(q, d, density, seed):
    n = q ** d
    return random_subset(q, d, max(1, int(round(density * n))), seed)


# --- commands --------------------------------------------------------------

def cmd_field_check(args):
    f = field_of_order(args.q)
    els = np.arange(f.q)
    nonzero = els[1:]
    inv_ok = bool(np.all(f.vmul(nonzero, f.inv_table[nonzero]) == 1))
    chi_scalar = np.array([f.chi(int(x)) for x in els])
    squares = np.zeros(f.q, dtype=bool)
    squares[f.vmul(els, els)] = True
    chi_oracle = np.where(els == 0, 0, np.where(squares, 1, -1))
    nu_order = f.order(f.nu)
    sample = els if f.q <= 64 else rng(0).choice(f.q, 64, replace=False)
    a, b, c = np.meshgrid(sample, sample, sample, indexing='ij')
    distributive = bool(np.all(f.vmul(a, f.vadd(b, c)) == f.vadd(f.vmul(a, b), f.vmul(a, c))))
    metrics = {'q': f.q, 'p': f.p, 'e': f.e, 'modulus': list(f.modulus), 'nu': f.nu,
               'nu_order': nu_order, 'squares': int(squares[1:].sum()),
               'chi_checksum': char_table_checksum(f)}
    flags = {'inverse_ok': inv_ok, 'chi_matches_squares': bool(np.array_equal(chi_scalar, chi_oracle)),
             'nu_generates': nu_order == f.q - 1, 'distributive': distributive,
             'square_count_ok': int(squares[1:].sum()) == (f.q - 1) // 2}
    return {'q': args.q}, metrics, flags


def cmd_sphere(args):
    q, d, t = args.q, args.d, args.a
    field_of_order(q)._check(t)
    metrics, flags = {}, {}
    if args.formula:
        metrics['size_formula'] = geometry.sphere_size_formula(q, d, t)
    if not args.formula_only:
        metrics['size_enumerated'] = geometry.sphere(q, d, t).size
    if 'size_formula' in metrics and 'size_enumerated' in metrics:
        flags['agree'] = metrics['size_formula'] == metrics['size_enumerated']
        metrics['agree'] = flags['agree']
    return {'q': q, 'd': d, 'a': t, 'formula': args.formula}, metrics, flags


def cmd_spectrum(args):
    g = build_graph(args.q, args.d, args.a)
    rep = g.spectrum
    ok, margin = check_ramanujan_bound(rep)
    metrics = {'valency': g.valency, **rep.to_dict(), 'ramanujan_margin': margin}
    flags = {'ramanujan_bound': ok}
    if args.dense:
        agree = spectra_agree(rep, dense_spectrum(g))
        metrics['agree'] = agree
        flags['agree'] = agree
    return {'q': args.q, 'd': args.d, 'a': args.a, 'dense': args.dense}, metrics, flags


def cmd_mixing(args):
    g = build_graph(args.q, args.d, args.a)
    r = mixing_trials(g, args.trials, args.set_size, args.seed)
    flags = {'variance_inequality': r['variance_violations'] == 0,
             'edge_discrepancy_inequality': r['discrepancy_violations'] == 0}
    return {'q': args.q, 'd': args.d, 'a': args.a, 'trials': args.trials, 'set_size': args.set_size,
            'seed': args.seed}, r, flags


def cmd_stars(args):
    col = NormColoring(args.q, args.d)
    k = len(args.type)
    if args.density >= 1:
        sets = [np.arange(col.n)] * (k + 1)
    else:
        sets = [_subset(args.q, args.d, args.density, args.seed * 10 + i) for i in range(k + 1)]
    rep = count_colored_stars(col, sets[0], sets[1:], args.type)
    metrics = {**rep.to_dict(), 'set_sizes': [len(E) for E in sets]}
    flags = {}
    if args.density >= 1:
        identity = full_space_star_identity(col, args.type)
        metrics['identity'] = identity
        flags['identity_ok'] = rep.exact_count == identity
    return {'q': args.q, 'd': args.d, 'type': args.type, 'density': args.density, 'seed': args.seed}, metrics, flags


def cmd_copies(args):
    with open(args.pattern) as fh:
        H = PatternGraph.from_json(fh.read())
    col = build_omega(args.q, args.d).coloring() if args.coloring == 'scheme' else NormColoring(args.q, args.d)
    if args.density >= 1:
        sets = [np.arange(col.n)] * H.s
    else:
        size = max(1, int(round(args.density * col.n)))
        sets = [np.sort(rng(args.seed, i).choice(col.n, size=size, replace=False)) for i in range(H.s)]
    rep = count_colored_copies(col, H, sets, mode=args.mode, samples=args.samples, seed=args.seed)
    metrics = {**rep.to_dict(), 'n': col.n, 'set_sizes': [len(E) for E in sets],
               'automorphisms': H.automorphism_count()}
    config = {'q': args.q, 'd': args.d, 'coloring': args.coloring, 'pattern': H.to_json(),
              'density': args.density, 'mode': args.mode, 'samples': args.samples, 'seed': args.seed}
    return config, metrics, {}


def cmd_scheme(args):
    rep = scheme_report(args.q, args.d)
    half = geometry.sphere_size_formula(args.q, args.d, 1) // 2
    flags = {'omega_size_ok': rep['omega_size'] == half,
             'regular': all(r['regular'] for r in rep['relations']),
             'partition_ok': rep['partition_ok'],
             'distance_relation_ok': rep['distance_relation_ok']}
    return {'q': args.q, 'd': args.d}, rep, flags


def cmd_census(args):
    d = 2 * args.k - 1 if args.d is None else args.d
    E = _subset(args.q, d, args.density, args.seed)
    mode = 'sampled' if args.mode == 'sample' else 'exact'
    if mode == 'sampled' and args.samples <= 0:
        raise ValueError('--mode sample needs --samples > 0')
    r = census(E, args.k, args.q, d, mode=mode, samples=args.samples, seed=args.seed, workers=args.workers)
    metrics = {**r.to_dict(), 'E_size': len(E)}
    flags = {'count_in_range': 0 <= r.count <= r.total_classes}
    config = {'q': args.q, 'k': args.k, 'd': d, 'density': args.density, 'mode': mode,
              'samples': args.samples if mode == 'sampled' else 0, 'seed': args.seed, 'workers': args.workers}
    return config, metrics, flags


def cmd_congruence(args):
    r = congruence_trials(args.q, args.d, args.trials, args.seed)
    flags = {'isometry_agree': r['isometry_agree'] == r['pairs'], 'forward_ok': r['forward_ok'] == r['pairs'],
             'special_mismatches_resolved': r['special_mismatch_resolved'] == r['special_mismatch']}
    return {'q': args.q, 'd': args.d, 'trials': args.trials, 'seed': args.seed}, r, flags


def cmd_pipeline(args):
    d = 2 * args.k - 1
    E = _subset(args.q, d, args.density, args.seed)
    rep = proof_pipeline(E, args.k, args.type, args.q)
    flags = {'sphere_membership_ok': rep.sphere_membership_ok, 'unit_norm_ok': rep.unit_norm_ok,
             'projection_ok': rep.projection_ok, 'positive_count': rep.total_copies > 0}
    config = {'q': args.q, 'k': args.k, 'type': args.type, 'density': args.density, 'seed': args.seed}
    return config, rep.to_dict(), flags


def cmd_main_theorem(args):
    r = main_theorem_experiment(args.q, args.k, args.density, args.seed, args.samples, args.workers)
    flags = {'count_in_range': 0 <= r['count'] <= r['total_classes']}
    config = {'q': args.q, 'k': args.k, 'density': args.density, 'samples': args.samples,
              'seed': args.seed, 'workers': args.workers}
    return config, r, flags


def cmd_accept(args):
    only = set(args.only) if args.only else None
    echo = (lambda r: print(r.line(), file=sys.stderr, flush=True)) if not args.quiet else None
    results = acceptance.acceptance_suite(args.profile, only, echo)
    metrics = {'criteria': [r.to_dict(timing=args.timing) for r in results]}
    flags = {f'criterion_{r.number}': r.passed for r in results}
    return {'profile': args.profile, 'only': sorted(only) if only else None}, metrics, flags


# --- parser ----------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=0, help='64-bit seed for every random choice')
    common.add_argument('--workers', type=int, default=1, help='process pool size')
    common.add_argument('--format', choices=('json', 'csv'), default='json')
    common.add_argument('--out', help='write the report here instead of stdout')
    common.add_argument('--cap', type=float, help='work cap (overrides FFS_CAP)')
    common.add_argument('--timing', action='store_true', help='include wall time in the report')

    parser = argparse.ArgumentParser(prog='ffsimplex', description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest='command', required=True, metavar='command')

    def add(name, fn, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(fn=fn)
        return p

    p = add('field-check', cmd_field_check, 'arithmetic and quadratic character self-checks')
    p.add_argument('--q', type=int, required=True)

    p = add('sphere', cmd_sphere, 'sphere size by enumeration and by formula')
    p.add_argument('--q', type=int, required=True)
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--a', type=int, required=True, help='radius t')
    p.add_argument('--formula', action='store_true', help='also evaluate the closed form')
    p.add_argument('--formula-only', action='store_true', help='skip enumeration (large q^d)')

    p = add('spectrum', cmd_spectrum, 'eigenvalues of G_q(a) by character sums')
    p.add_argument('--q', type=int, required=True)
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--a', type=int, required=True)
    p.add_argument('--dense', action='store_true', help='cross-check with a dense eigensolve')

    p = add('mixing', cmd_mixing, 'random-subset checks of the spectral mixing inequalities')
    p.add_argument('--q', type=int, required=True)
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--a', type=int, required=True)
    p.add_argument('--trials', type=int, default=100)
    p.add_argument('--set-size', type=int)

    p = add('stars', cmd_stars, 'colored k-star counts on random subsets')
    p.add_argument('--q', type=int, required=True)
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--type', type=_ints, required=True, help='leaf colors, e.g. 1,1,1')
    p.add_argument('--density', type=_density, default=1.0)

    p = add('copies', cmd_copies, 'colored copies of a pattern graph given as JSON')
    p.add_argument('--q', type=int, required=True)
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--pattern', required=True, help='JSON file {"s": ..., "edges": [[i, j, color], ...]}')
    p.add_argument('--coloring', choices=('euclid', 'scheme'), default='euclid')
    p.add_argument('--density', type=_density, default=1.0)
    p.add_argument('--mode', choices=('exact', 'sample'), default='exact')
    p.add_argument('--samples', type=int, default=100_000)

    p = add('scheme', cmd_scheme, 'the orthogonal scheme on square-type lines')
    p.add_argument('--q', type=int, required=True)
    p.add_argument('--d', type=int, default=5)

    p = add('census', cmd_census, 'distinct edge-norm vectors of nondegenerate simplexes')
    p.add_argument('--q', type=int, required=True)
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--d', type=int, help='dimension (default 2k-1)')
    p.add_argument('--density', type=_density, default=1.0)
    p.add_argument('--mode', choices=('exact', 'sample'), default='exact')
    p.add_argument('--samples', type=int, default=0)

    p = add('congruence-check', cmd_congruence, 'isometry search against edge-norm equality')
    p.add_argument('--q', type=int, required=True)
    p.add_argument('--d', type=int, required=True)
    p.add_argument('--trials', type=int, default=200)

    p = add('pipeline', cmd_pipeline, 'replay the star / sphere / line counting argument')
    p.add_argument('--q', type=int, required=True)
    p.add_argument('--k', type=int, default=3)
    p.add_argument('--type', type=_ints, required=True)
    p.add_argument('--density', type=_density, default=1.0)

    p = add('main-theorem', cmd_main_theorem, 'sampled census on a random set of given density')
    p.add_argument('--q', type=int, required=True)
    p.add_argument('--k', type=int, default=3)
    p.add_argument('--density', type=_density, required=True)
    p.add_argument('--samples', type=int, default=10 ** 7)

    p = add('accept', cmd_accept, 'run the acceptance criteria')
    p.add_argument('--profile', choices=acceptance.PROFILES, default='quick')
    p.add_argument('--only', type=_ints, help='comma-separated criterion numbers')
    p.add_argument('--quiet', action='store_true', help='no per-criterion lines on stderr')
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workers < 1:
        parser.error('--workers must be >= 1')
    saved_cap = os.environ.get('FFS_CAP')
    if args.cap is not None:
        os.environ['FFS_CAP'] = str(int(args.cap))
    start = time.perf_counter()
    try:
        config, metrics, flags = args.fn(args)
    except (ValueError, WorkCapExceeded, OSError) as exc:
        print(f'ffsimplex {args.command}: error: {exc}', file=sys.stderr)
        return EXIT_USAGE
    finally:
        if saved_cap is None:
            os.environ.pop('FFS_CAP', None)
        else:
            os.environ['FFS_CAP'] = saved_cap
    wall = time.perf_counter() - start if args.timing else None
    config = {**config, 'workers': args.workers, 'cap': args.cap}
    report = make_report(args.command, config, metrics, flags, wall)
    text = render(report, args.format)
    if args.out:
        with open(args.out, 'w') as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report['passed'] else EXIT_FAIL


if __name__ == '__main__':
    sys.exit(main())
