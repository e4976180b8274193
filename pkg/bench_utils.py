# coding=utf-8
"""Benchmark matrix: instances x seeds x solvers, aggregated into tables."""

import collections
import hashlib
import json
import logging
import math
import os

import pandas as pd
import torch
import torch.multiprocessing as mp
from filelock import FileLock
from tqdm import tqdm

from arguments import SOLVERS
from composite.errors import ConvergenceError, InvalidInputError, UnsupportedFeatureError
from composite.lifting import lift
from composite.spectral import spectral_norm
from data_utils.instances import InstanceSpec, generate_instance
from data_utils.serialization import INSTANCE_SUFFIX, load_instance, save_instance
from solvers.fbe_lbfgs import fbe_lbfgs_minimize
from solvers.line_search import LineSearchConfig
from solvers.npg import NpgConfig, npg_major_minimize, npg_minimize
from utils import Timers, print_rank_0

logger = logging.getLogger(__name__)

ROW_COLUMNS = ['m', 'n', 's', 't_lambda_max', 'solver', 'seed', 'iter', 'time_s', 'fval', 'residual',
               'termination']
SPEC_COLUMNS = ['m', 'n', 's']
DEFAULT_GAMMA_FACTOR = 0.95
MAX_GAMMA_FACTOR = 0.999
DEFAULT_TOLERANCES = {'fbe_lbfgs': 1e-6, 'npg': 1e-4, 'npg_major': 1e-4}

SolverRun = collections.namedtuple('SolverRun', ['label', 'solver', 'tol', 'gamma_factor'])


def fbe_label(gamma_factor):
    if gamma_factor == DEFAULT_GAMMA_FACTOR:
        return 'fbe_lbfgs'
    return 'fbe_lbfgs@{:g}'.format(gamma_factor)


def npg_variant_label(tol):
    return 'npg_{:d}'.format(int(round(math.log10(tol))))


def normalize_config(sd):
    """Resolve the JSON shorthands `mu` and `num_seeds` and drop the version tag."""
    sd = dict(sd)
    sd.pop('version', None)
    if 'mu' in sd:
        mu = sd.pop('mu')
        sd.setdefault('mu1', mu)
        sd.setdefault('mu2', mu)
    if 'num_seeds' in sd:
        sd['seeds'] = list(range(1, int(sd.pop('num_seeds')) + 1))
    return sd


class BenchConfig:
    """Everything one benchmark needs: instance specs, seeds, solvers and outputs."""

    def __init__(self, instances, seeds=(1,), solvers=SOLVERS, mu1=5e-4, mu2=None, tolerances=None,
                 gamma_factors=(DEFAULT_GAMMA_FACTOR,), npg_tolerances=(), repetitions=1, workers=1, threads=1,
                 out=None, cache_dir=None, name='bench', line_search=None, npg=None, direction='lbfgs',
                 debug=False):
        self.instances = [spec if isinstance(spec, InstanceSpec) else InstanceSpec.from_dict(spec)
                          for spec in instances]
        self.seeds = [int(seed) for seed in seeds]
        unknown = [solver for solver in solvers if solver not in SOLVERS]
        if unknown:
            raise UnsupportedFeatureError('unknown solvers {}, choose from {}'.format(unknown, SOLVERS))
        self.solvers = list(solvers)
        self.mu1 = float(mu1)
        self.mu2 = self.mu1 if mu2 is None else float(mu2)
        self.tolerances = dict(DEFAULT_TOLERANCES)
        self.tolerances.update(tolerances or {})
        for factor in gamma_factors:
            if not 0.0 < factor < MAX_GAMMA_FACTOR:
                raise InvalidInputError('gamma factor must lie in (0, {}), got {}'.format(MAX_GAMMA_FACTOR, factor))
        self.gamma_factors = [float(factor) for factor in gamma_factors]
        self.npg_tolerances = [float(tol) for tol in npg_tolerances]
        if int(repetitions) < 1:
            raise InvalidInputError('repetitions must be at least 1, got {}'.format(repetitions))
        self.repetitions = int(repetitions)
        self.workers = max(1, int(workers))
        self.threads = max(1, int(threads))
        self.out = out
        self.cache_dir = cache_dir
        self.name = name
        self.line_search = LineSearchConfig.from_dict(line_search or {})
        self.npg = NpgConfig.from_dict(npg or {})
        self.direction = direction
        self.debug = bool(debug)

    def solver_runs(self):
        runs = []
        for solver in self.solvers:
            if solver == 'fbe_lbfgs':
                for factor in self.gamma_factors:
                    runs.append(SolverRun(fbe_label(factor), solver, self.tolerances[solver], factor))
            else:
                runs.append(SolverRun(solver, solver, self.tolerances[solver], None))
        for tol in self.npg_tolerances:
            runs.append(SolverRun(npg_variant_label(tol), 'npg', tol, None))
        return runs

    def tasks(self):
        specs = sorted(self.instances, key=InstanceSpec.key)
        return [(self.to_dict(), spec.with_seed(seed).to_dict()) for spec in specs for seed in self.seeds]

    @classmethod
    def from_dict(cls, sd):
        return cls(**normalize_config(sd))

    @classmethod
    def from_args(cls, args):
        """CLI defaults, then the JSON config, then explicit override flags."""
        sd = {
            'instances': [{'family': args.family, 'm': args.m, 'n': args.n, 's': args.s, 'sigma': args.noise,
                           'F': args.F}],
            'mu1': args.mu1,
            'mu2': args.mu2,
            'tolerances': {'fbe_lbfgs': args.fbe_tol, 'npg': args.npg_tol, 'npg_major': args.npg_tol},
            'line_search': LineSearchConfig.from_args(args).to_dict(),
            'npg': NpgConfig.from_args(args).to_dict(),
            'direction': args.direction,
            'debug': args.debug,
            'threads': args.threads,
            'cache_dir': args.cache_dir,
            'name': args.experiment_name,
        }
        if args.config_dict is not None:
            config = normalize_config(args.config_dict)
            for key in ('tolerances', 'line_search', 'npg'):
                if key in config:
                    merged = dict(sd[key])
                    merged.update(config.pop(key))
                    sd[key] = merged
            sd.update(config)
        if args.num_seeds is not None:
            sd['seeds'] = list(range(1, args.num_seeds + 1))
        if args.seed is not None:
            sd['seeds'] = [args.seed]
        sd.setdefault('seeds', [1])
        if args.tol is not None:
            sd['tolerances'] = {solver: args.tol for solver in SOLVERS}
        if args.gamma_factor is not None:
            sd['gamma_factors'] = [args.gamma_factor]
        if args.out is not None:
            sd['out'] = args.out
        if args.solvers is not None:
            sd['solvers'] = args.solvers
        if args.workers is not None:
            sd['workers'] = args.workers
        return cls.from_dict(sd)

    def to_dict(self):
        return {
            'instances': [spec.to_dict() for spec in self.instances],
            'seeds': list(self.seeds),
            'solvers': list(self.solvers),
            'mu1': self.mu1,
            'mu2': self.mu2,
            'tolerances': dict(self.tolerances),
            'gamma_factors': list(self.gamma_factors),
            'npg_tolerances': list(self.npg_tolerances),
            'repetitions': self.repetitions,
            'workers': self.workers,
            'threads': self.threads,
            'out': self.out,
            'cache_dir': self.cache_dir,
            'name': self.name,
            'line_search': self.line_search.to_dict(),
            'npg': self.npg.to_dict(),
            'direction': self.direction,
            'debug': self.debug
        }


def cache_path(spec, cache_dir):
    digest = hashlib.sha1(json.dumps(spec.to_dict(), sort_keys=True).encode('utf-8')).hexdigest()[:8]
    return os.path.join(cache_dir, '{}_{}{}'.format(spec.name, digest, INSTANCE_SUFFIX))


def cached_instance(spec, cache_dir):
    """Load the instance from the cache, generating it under a file lock on a miss."""
    os.makedirs(cache_dir, exist_ok=True)
    path = cache_path(spec, cache_dir)
    with FileLock(path + '.lock', timeout=-1):
        if os.path.exists(path):
            return load_instance(path)
        instance = generate_instance(spec)
        save_instance(instance, path)
        return instance


def compute_lambda_max(A):
    try:
        return spectral_norm(A)
    except ConvergenceError as error:
        logger.warning('%s; using the last estimate %.6g', error, error.estimate)
        return error.estimate


def run_solver(run, config, dc, problem):
    if run.solver == 'fbe_lbfgs':
        line_search = LineSearchConfig.from_dict(dict(config.line_search.to_dict(), tol=run.tol))
        gamma = run.gamma_factor / problem.curvature_bound
        return fbe_lbfgs_minimize(problem, gamma, line_search, direction=config.direction, debug=config.debug,
                                  name=run.label)
    npg_config = NpgConfig.from_dict(dict(config.npg.to_dict(), tol=run.tol,
                                          max_iter=config.line_search.max_iter))
    if run.solver == 'npg':
        return npg_minimize(dc, npg_config, name=run.label)
    return npg_major_minimize(dc, npg_config, name=run.label)


def run_instance(config, spec):
    """All solver runs on one seeded instance; returns one row per run."""
    torch.set_num_threads(config.threads)
    if config.cache_dir:
        instance = cached_instance(spec, config.cache_dir)
    else:
        instance = generate_instance(spec)
    dc = instance.to_problem(config.mu1, config.mu2)

    timers = Timers()
    with timers('lambda_max'):
        lambda_max = compute_lambda_max(dc.A)
    t_lambda_max = timers('lambda_max').elapsed()
    problem = lift(dc, lambda_max)

    rows = []
    for run in config.solver_runs():
        times = []
        report = None
        for _ in range(config.repetitions):
            report = run_solver(run, config, dc, problem)
            times.append(report.wall_time_s)
        rows.append({
            'm': spec.m,
            'n': spec.n,
            's': spec.s,
            't_lambda_max': t_lambda_max,
            'solver': run.label,
            'seed': spec.seed,
            'iter': report.iterations,
            'time_s': sum(times) / len(times),
            'fval': report.original_objective,
            'residual': report.final_residual,
            'termination': report.termination,
        })
    return rows


def run_instance_task(task):
    config_dict, spec_dict = task
    return run_instance(BenchConfig.from_dict(config_dict), InstanceSpec.from_dict(spec_dict))


def sort_rows(rows, labels):
    order = {label: index for index, label in enumerate(labels)}
    return sorted(rows, key=lambda row: (row['m'], row['n'], row['s'], row['seed'],
                                         order.get(row['solver'], len(order)), row['solver']))


def run_benchmark(config, progress=True):
    """Run every (spec, seed, solver) combination; rows come back sorted."""
    runs = config.solver_runs()
    if not runs:
        logger.warning('no solvers selected; the benchmark table is empty')
        print_rank_0('WARNING: no solvers selected')
        return []
    tasks = config.tasks()
    rows = []
    if config.workers > 1 and len(tasks) > 1:
        context = mp.get_context('spawn')
        with context.Pool(min(config.workers, len(tasks))) as pool:
            for task_rows in tqdm(pool.imap_unordered(run_instance_task, tasks), total=len(tasks),
                                  disable=not progress):
                rows.extend(task_rows)
    else:
        for task in tqdm(tasks, disable=not progress):
            rows.extend(run_instance_task(task))
    return sort_rows(rows, [run.label for run in runs])


def aggregate(rows, labels=None):
    """Mean and standard deviation per (m, n, s, solver)."""
    if not rows:
        return pd.DataFrame()
    frame = pd.DataFrame(rows, columns=ROW_COLUMNS)
    grouped = frame.groupby(SPEC_COLUMNS + ['solver'], sort=False)
    stats = grouped.agg(t_lambda_max=('t_lambda_max', 'mean'),
                        iter=('iter', 'mean'), iter_std=('iter', lambda x: x.std(ddof=0)),
                        time_s=('time_s', 'mean'), time_s_std=('time_s', lambda x: x.std(ddof=0)),
                        fval=('fval', 'mean'), fval_std=('fval', lambda x: x.std(ddof=0))).reset_index()
    if labels is None:
        labels = list(dict.fromkeys(frame['solver']))

    summary = []
    for key, block in stats.groupby(SPEC_COLUMNS, sort=True):
        entry = dict(zip(SPEC_COLUMNS, key))
        entry['t_lambda_max'] = block['t_lambda_max'].mean()
        by_solver = block.set_index('solver')
        for metric in ('iter', 'time_s', 'fval', 'iter_std', 'time_s_std', 'fval_std'):
            for label in labels:
                entry['{}:{}'.format(metric, label)] = by_solver[metric].get(label, float('nan'))
        summary.append(entry)
    return pd.DataFrame(summary)


FORMATS = {
    't_lambda_max': '{:.3f}',
    'iter': '{:.0f}',
    'time_s': '{:.3f}',
    'fval': '{:.4e}',
    'iter_std': '{:.1f}',
    'time_s_std': '{:.3f}',
    'fval_std': '{:.1e}',
}


def format_summary(summary):
    """String-valued copy of the summary, shared by the CSV and Markdown writers."""
    formatted = pd.DataFrame(index=summary.index)
    for column in summary.columns:
        metric = column.split(':')[0]
        if metric in SPEC_COLUMNS:
            formatted[column] = summary[column].map(lambda value: '{:d}'.format(int(value)))
        else:
            fmt = FORMATS[metric]
            formatted[column] = summary[column].map(lambda value, fmt=fmt: '-' if pd.isna(value) else fmt.format(value))
    return formatted


def to_markdown(formatted):
    header = [column.replace(':', ' ') for column in formatted.columns]
    lines = ['| ' + ' | '.join(header) + ' |',
             '|' + '|'.join(['---:'] * len(header)) + '|']
    for _, row in formatted.iterrows():
        lines.append('| ' + ' | '.join(row.tolist()) + ' |')
    return '\n'.join(lines) + '\n'


def write_outputs(rows, config, out_dir=None):
    """Write rows.csv, summary.csv, summary.md and the resolved config; returns the paths."""
    out_dir = out_dir or config.out
    if out_dir is None:
        return {}
    os.makedirs(out_dir, exist_ok=True)
    labels = [run.label for run in config.solver_runs()]
    paths = {
        'rows': os.path.join(out_dir, '{}_rows.csv'.format(config.name)),
        'summary_csv': os.path.join(out_dir, '{}_summary.csv'.format(config.name)),
        'summary_md': os.path.join(out_dir, '{}_summary.md'.format(config.name)),
        'config': os.path.join(out_dir, '{}_config.json'.format(config.name)),
    }
    frame = pd.DataFrame(rows, columns=ROW_COLUMNS)
    frame.to_csv(paths['rows'], index=False, float_format='%.17g')

    formatted = format_summary(aggregate(rows, labels))
    formatted.to_csv(paths['summary_csv'], index=False)
    with open(paths['summary_md'], 'w') as output:
        output.write(to_markdown(formatted) if len(formatted.columns) else '')
    with open(paths['config'], 'w') as output:
        json.dump(dict(config.to_dict(), version=1), output, sort_keys=True, indent=2)
    return paths
