# coding=utf-8
"""Forward-backward envelope benchmark: gen / solve / bench / check."""

import json
import logging
import os
import sys

import torch
from termcolor import colored

from arguments import get_args
from bench_utils import BenchConfig, compute_lambda_max, run_benchmark, write_outputs
from composite.lifting import coercivity_precheck, lift
from data_utils.instances import InstanceSpec, generate_instance
from data_utils.serialization import INSTANCE_SUFFIX, load_instance, save_instance
from property_checks import all_passed, run_suites, summarize
from solvers.fbe_lbfgs import fbe_lbfgs_minimize
from solvers.line_search import LineSearchConfig
from solvers.npg import NpgConfig, npg_major_minimize, npg_minimize
from utils import Timers, get_log_dir, get_sample_writer, print_and_save_args, print_rank_0, set_random_seed

logger = logging.getLogger(__name__)


def seeds_from_args(args):
    if args.num_seeds is not None:
        return list(range(1, args.num_seeds + 1))
    return [1 if args.seed is None else args.seed]


def instance_specs_from_args(args):
    """Instance specs of the JSON config, or the single spec given by flags."""
    if args.config_dict is not None and 'instances' in args.config_dict:
        templates = [InstanceSpec.from_dict(spec) for spec in args.config_dict['instances']]
        seeds = args.config_dict.get('seeds')
        if seeds is None and 'num_seeds' in args.config_dict:
            seeds = list(range(1, int(args.config_dict['num_seeds']) + 1))
        if args.seed is not None or args.num_seeds is not None or seeds is None:
            seeds = seeds_from_args(args)
    else:
        templates = [InstanceSpec(args.family, args.m, args.n, args.s, sigma=args.noise, F=args.F)]
        seeds = seeds_from_args(args)
    return [template.with_seed(seed) for template in templates for seed in seeds]


def command_gen(args):
    out = args.out or (args.config_dict or {}).get('out') or 'instances'
    for spec in instance_specs_from_args(args):
        instance = generate_instance(spec)
        path = os.path.join(out, spec.name + INSTANCE_SUFFIX)
        digest = save_instance(instance, path)
        print_rank_0(' > wrote {} (sha256 {})'.format(path, digest[:16]))
    return 0


def command_solve(args):
    timers = Timers()
    if args.instance is not None:
        instance = load_instance(args.instance)
    else:
        instance = generate_instance(instance_specs_from_args(args)[0])
    spec = instance.spec
    dc = instance.to_problem(args.mu1, args.mu2)
    check = coercivity_precheck(dc)
    print_rank_0(' > instance {} | mu1 {:.3e} | mu2 {:.3e} | coercivity: {}'.format(
        spec.name, dc.mu1, dc.mu2, check.reason))

    summary_writer = None
    if args.summary_dir:
        summary_writer = get_sample_writer(get_log_dir(args.experiment_name, args.summary_dir))

    if args.solver == 'fbe_lbfgs':
        with timers('lambda_max'):
            lambda_max = compute_lambda_max(dc.A)
        problem = lift(dc, lambda_max)
        gamma_factor = 0.95 if args.gamma_factor is None else args.gamma_factor
        config = LineSearchConfig.from_args(args, tol=args.tol)
        with timers('solve'):
            report = fbe_lbfgs_minimize(problem, gamma_factor / problem.curvature_bound, config,
                                        direction=args.direction, debug=args.debug,
                                        log_interval=args.log_interval, summary_writer=summary_writer)
    else:
        config = NpgConfig.from_args(args, tol=args.tol)
        minimize = npg_minimize if args.solver == 'npg' else npg_major_minimize
        with timers('solve'):
            report = minimize(dc, config, log_interval=args.log_interval, summary_writer=summary_writer)
    timers.log()

    if summary_writer is not None:
        summary_writer.close()
    print_rank_0(' > {}'.format(report))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, '{}_{}.json'.format(spec.name, report.solver))
        with open(path, 'w') as output:
            json.dump(dict(report.to_dict(with_history=True), instance=spec.to_dict()), output, indent=2)
        print_rank_0(' > wrote {}'.format(path))
    return 0


def command_bench(args):
    config = BenchConfig.from_args(args)
    if config.out:
        print_and_save_args(args, verbose=False, log_dir=config.out)
    rows = run_benchmark(config)
    paths = write_outputs(rows, config)
    if args.summary_dir:
        summary_writer = get_sample_writer(get_log_dir(config.name, args.summary_dir))
        for row in rows:
            tag = '{}/m{}_n{}_s{}/'.format(row['solver'], row['m'], row['n'], row['s'])
            summary_writer.add_scalar(tag + 'iter', row['iter'], row['seed'])
            summary_writer.add_scalar(tag + 'fval', row['fval'], row['seed'])
        summary_writer.close()
    failures = [row for row in rows if row['termination'] != 'converged']
    for row in failures:
        print_rank_0('WARNING: {} on m={} n={} s={} seed={} ended with {}'.format(
            row['solver'], row['m'], row['n'], row['s'], row['seed'], row['termination']))
    for name, path in sorted(paths.items()):
        print_rank_0(' > {}: {}'.format(name, path))
    if 'summary_md' in paths:
        with open(paths['summary_md']) as file:
            print_rank_0(file.read())
    return 0


def command_check(args):
    results = run_suites(args.suites, quick=args.quick, seed=args.seed)
    for result in results:
        status = colored('PASS', 'green') if result.passed else colored('FAIL', 'red')
        print_rank_0(' {} {:<22s} worst {:.3e} (limit {:.1e}) over {} checks'.format(
            status, result.name, result.worst, result.limit, result.checked))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, 'check.json'), 'w') as output:
            json.dump(summarize(results), output, indent=2, sort_keys=True)
    return 0 if all_passed(results) else 1


COMMANDS = {
    'gen': command_gen,
    'solve': command_solve,
    'bench': command_bench,
    'check': command_check,
}


def main(argv=None):
    """Main benchmark program."""
    logging.basicConfig(level=logging.INFO, format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    args = get_args(argv)
    torch.set_num_threads(getattr(args, 'threads', 1))
    set_random_seed(args.seed if args.seed is not None else 1)
    return COMMANDS[args.command](args)


if __name__ == '__main__':
    sys.exit(main())
