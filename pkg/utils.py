# coding=utf-8
"""Utilities for logging, timing and argument dumping"""

import json
import os
import random
import time

import numpy as np
import torch
import torch.multiprocessing as mp
from tensorboardX import SummaryWriter

SUMMARY_WRITER_DIR_NAME = 'runs'


def get_log_dir(name, base):
    return os.path.join(base, SUMMARY_WRITER_DIR_NAME, name)


def get_sample_writer(log_dir, iteration=0):
    """Returns a tensorboard summary writer
    """
    return SummaryWriter(
        log_dir=log_dir, purge_step=iteration)


def is_main_process():
    """Benchmark rows run in spawned workers; only the parent prints."""
    return mp.current_process().name == 'MainProcess'


def print_rank_0(message):
    if is_main_process():
        print(message, flush=True)


def set_random_seed(seed):
    """Seed python, numpy and torch; numpy only takes 32-bit seeds."""
    random.seed(seed)
    np.random.seed(seed % 2 ** 32)
    torch.manual_seed(seed)


def print_and_save_args(args, verbose=True, log_dir=None):
    """Print arguments and dump them to <log_dir>/config.json."""
    if verbose:
        print_rank_0('arguments:')
        for arg in vars(args):
            dots = '.' * (29 - len(arg))
            print_rank_0('  {} {} {}'.format(arg, dots, getattr(args, arg)))
    if log_dir is not None:
        os.makedirs(log_dir, exist_ok=True)
        with open(os.path.join(log_dir, 'config.json'), 'w') as output:
            json.dump(vars(args), output, sort_keys=True, default=str)


class Timers:
    """Named accumulating wall-clock timers on the monotonic clock."""

    class Timer:

        def __init__(self, name):
            self.name = name
            self.total = 0.0
            self.count = 0
            self.since = None

        @property
        def running(self):
            return self.since is not None

        def start(self):
            if self.running:
                raise RuntimeError('timer {} is already running'.format(self.name))
            self.since = time.perf_counter()
            return self

        def stop(self):
            if not self.running:
                raise RuntimeError('timer {} is not running'.format(self.name))
            self.total += time.perf_counter() - self.since
            self.count += 1
            self.since = None
            return self

        def elapsed(self, reset=True):
            """Seconds accumulated so far, including a running interval."""
            total = self.total
            if self.running:
                total += time.perf_counter() - self.since
            if reset:
                self.total, self.count = 0.0, 0
                if self.running:
                    self.since = time.perf_counter()
            return total

        def __enter__(self):
            return self.start()

        def __exit__(self, *exc):
            self.stop()
            return False

    def __init__(self):
        self.timers = {}

    def __call__(self, name):
        if name not in self.timers:
            self.timers[name] = self.Timer(name)
        return self.timers[name]

    def log(self, names=None, reset=True):
        """Print `time (s) | name: seconds (calls)` for the given timers."""
        names = sorted(self.timers) if names is None else names
        fields = ['{}: {:.3f} ({})'.format(name, self.timers[name].elapsed(reset=False), self.timers[name].count)
                  for name in names]
        if reset:
            for name in names:
                self.timers[name].elapsed(reset=True)
        print_rank_0(' | '.join(['time (s)'] + fields))
