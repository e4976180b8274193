# coding=utf-8
"""argparser configuration"""

import argparse
import json

CONFIG_VERSION = 1
COMMANDS = ('gen', 'solve', 'bench', 'check')
SOLVERS = ('fbe_lbfgs', 'npg', 'npg_major')


def add_solver_config_args(parser):
    """Envelope line-search arguments"""

    group = parser.add_argument_group('fbe', 'envelope line-search configuration')

    group.add_argument('--sigma', type=float, default=1e-4,
                       help='Armijo sufficient-decrease constant')
    group.add_argument('--eta', type=float, default=0.5,
                       help='backtracking factor')
    group.add_argument('--c1', type=float, default=1e-5,
                       help='angle-condition constant of the direction gate')
    group.add_argument('--c2', type=float, default=1e5,
                       help='norm-condition constant of the direction gate')
    group.add_argument('--fbe-tol', type=float, default=1e-6,
                       help='stop when ||grad F_gamma|| / max(1, F_gamma) falls below this value')
    group.add_argument('--max-iter', type=int, default=10 ** 6,
                       help='iteration cap for every solver')
    group.add_argument('--max-backtracks', type=int, default=60,
                       help='backtracking cap of the Armijo search')
    group.add_argument('--lbfgs-memory', type=int, default=10,
                       help='number of stored curvature pairs')
    group.add_argument('--gamma-factor', type=float, default=None,
                       help='envelope step gamma = factor / L (default 0.95)')
    group.add_argument('--direction', type=str, default='lbfgs', choices=['lbfgs', 'steepest'],
                       help='search direction provider')
    group.add_argument('--debug', action='store_true',
                       help='check the per-step decrease bounds at every iteration')
    return parser


def add_npg_config_args(parser):
    """Nonmonotone proximal gradient arguments"""

    group = parser.add_argument_group('npg', 'nonmonotone proximal gradient configuration')

    group.add_argument('--npg-tau', type=float, default=2.0,
                       help='curvature increase factor')
    group.add_argument('--npg-c', type=float, default=1e-4,
                       help='nonmonotone sufficient-decrease constant')
    group.add_argument('--npg-memory', type=int, default=4,
                       help='number of previous objective values in the nonmonotone max')
    group.add_argument('--npg-initial-curvature', type=float, default=1.0,
                       help='curvature estimate of the first iteration')
    group.add_argument('--npg-tol', type=float, default=1e-4,
                       help='stop when ||z^k - z^{k-1}|| / max(1, h) falls below this value')
    return parser


def add_instance_args(parser):
    """Instance arguments"""

    group = parser.add_argument_group('instance', 'random instance configuration')

    group.add_argument('--family', type=str, default='gaussian_unit_columns',
                       choices=['gaussian_unit_columns', 'oversampled_dct'],
                       help='random instance family')
    group.add_argument('--m', type=int, default=720, help='number of measurements')
    group.add_argument('--n', type=int, default=2560, help='signal dimension')
    group.add_argument('--s', type=int, default=160, help='sparsity of the planted signal')
    group.add_argument('--noise', type=float, default=1e-2, help='noise level sigma')
    group.add_argument('--F', type=int, default=20, help='DCT frequency parameter')
    group.add_argument('--seed', type=int, default=None, help='random seed (default 1)')
    group.add_argument('--num-seeds', type=int, default=None,
                       help='use seeds 1..k instead of a single seed')
    group.add_argument('--instance', type=str, default=None,
                       help='load this instance file instead of generating one')
    group.add_argument('--mu', type=float, default=5e-4,
                       help='regularization weight, mu1 = mu2 = mu')
    group.add_argument('--mu1', type=float, default=None, help='l1 weight (overrides --mu)')
    group.add_argument('--mu2', type=float, default=None, help='l2 weight (overrides --mu)')
    return parser


def add_bench_args(parser):
    """Benchmark and output arguments"""

    group = parser.add_argument_group('bench', 'benchmark configuration')

    group.add_argument('--config', type=str, default=None,
                       help='JSON benchmark configuration (version {})'.format(CONFIG_VERSION))
    group.add_argument('--solvers', type=str, nargs='*', default=None, choices=SOLVERS,
                       help='solvers to run')
    group.add_argument('--tol', type=float, default=None,
                       help='override the tolerance of every solver')
    group.add_argument('--out', type=str, default=None, help='output directory')
    group.add_argument('--workers', type=int, default=None,
                       help='parallel worker processes')
    group.add_argument('--threads', type=int, default=1,
                       help='torch intra-op threads per worker')
    group.add_argument('--cache-dir', type=str, default=None,
                       help='directory caching generated instances')
    group.add_argument('--experiment-name', type=str, default='fbe',
                       help='name used for summaries and output files')
    group.add_argument('--log-interval', type=int, default=0,
                       help='report interval in iterations (0 disables)')
    group.add_argument('--summary-dir', type=str, default='',
                       help='directory to store tensorboard summaries')
    return parser


def add_check_args(parser):
    """Property-suite arguments"""

    group = parser.add_argument_group('check', 'property suites')

    group.add_argument('--suites', type=str, nargs='*', default=None,
                       help='suites to run (default: all)')
    group.add_argument('--quick', action='store_true',
                       help='run the suites on fewer samples')
    return parser


def build_parser():
    parser = argparse.ArgumentParser(description='Forward-backward envelope benchmark')
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True

    gen = subparsers.add_parser('gen', help='write instance files')
    gen = add_instance_args(gen)
    gen = add_bench_args(gen)

    solve = subparsers.add_parser('solve', help='run one solver on one instance')
    solve = add_instance_args(solve)
    solve = add_solver_config_args(solve)
    solve = add_npg_config_args(solve)
    solve = add_bench_args(solve)
    solve.add_argument('--solver', type=str, default='fbe_lbfgs', choices=SOLVERS)

    bench = subparsers.add_parser('bench', help='run a solver matrix and write tables')
    bench = add_instance_args(bench)
    bench = add_solver_config_args(bench)
    bench = add_npg_config_args(bench)
    bench = add_bench_args(bench)

    check = subparsers.add_parser('check', help='run property suites')
    check = add_check_args(check)
    check.add_argument('--seed', type=int, default=1, help='random seed')
    check.add_argument('--out', type=str, default=None, help='write a JSON summary here')
    return parser


def load_config(path):
    """Read a versioned JSON configuration."""
    with open(path) as file:
        config = json.load(file)
    version = config.get('version')
    if version != CONFIG_VERSION:
        raise ValueError('config {} has version {}, expected {}'.format(path, version, CONFIG_VERSION))
    return config


def get_args(argv=None):
    """Parse all the args."""

    parser = build_parser()
    args = parser.parse_args(argv)

    args.config_dict = None
    if getattr(args, 'config', None):
        args.config_dict = load_config(args.config)

    if hasattr(args, 'mu'):
        if args.mu1 is None:
            args.mu1 = args.mu
        if args.mu2 is None:
            args.mu2 = args.mu
    return args
