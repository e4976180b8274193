# coding=utf-8
"""Nonmonotone proximal gradient baselines on the original l1-l2 problem.

Both methods take z^{k+1} from a proximal step with curvature L_k,
increasing L_k by tau until

    h(z^{k+1}) <= max_{[k-M]_+ <= i <= k} h(z^i) - c/2 ||z^{k+1} - z^k||^2.

`npg` solves the l1-l2 subproblem exactly; `npg_major` replaces -||z|| by
its linearization at z^k and only needs soft thresholding.
"""

import collections
import logging
import time

import torch

from composite.errors import InvalidInputError, NumericError
from composite.numerics import ensure_finite, relative_to_value
from composite.problem import LeastSquaresTerm
from composite.prox import l1l2_prox, soft_threshold
from utils import print_rank_0

from .report import CONVERGED, MAX_ITER, NUMERIC_ERROR, RunReport
from .step_sizes import BarzilaiBorweinCurvature

logger = logging.getLogger(__name__)


class NpgConfig:
    """Parameters of the nonmonotone proximal gradient methods.

    Arguments:
        tau: curvature increase factor, > 1.
        c: sufficient-decrease constant, > 0.
        memory: M, the number of previous values in the nonmonotone max.
        initial_curvature: L_0^0.
        curvature_min, curvature_max: clip range of the Barzilai-Borwein value.
        tol: stop when ||z^k - z^{k-1}|| / max(1, h(z^k)) < tol.
        max_iter: iteration cap.
    """

    def __init__(self, tau=2.0, c=1e-4, memory=4, initial_curvature=1.0, curvature_min=1e-8,
                 curvature_max=1e8, tol=1e-4, max_iter=10 ** 6):
        if not tau > 1:
            raise InvalidInputError('tau must exceed 1, got {}'.format(tau))
        if not c > 0:
            raise InvalidInputError('c must be positive, got {}'.format(c))
        if memory < 0:
            raise InvalidInputError('memory must be nonnegative, got {}'.format(memory))
        if not 0 < curvature_min <= curvature_max:
            raise InvalidInputError('need 0 < curvature_min <= curvature_max')
        if not tol > 0:
            raise InvalidInputError('tol must be positive, got {}'.format(tol))
        self.tau = float(tau)
        self.c = float(c)
        self.memory = int(memory)
        self.initial_curvature = float(initial_curvature)
        self.curvature_min = float(curvature_min)
        self.curvature_max = float(curvature_max)
        self.tol = float(tol)
        self.max_iter = int(max_iter)

    @classmethod
    def from_args(cls, args, tol=None):
        return cls(tau=args.npg_tau, c=args.npg_c, memory=args.npg_memory,
                   initial_curvature=args.npg_initial_curvature,
                   tol=args.npg_tol if tol is None else tol, max_iter=args.max_iter)

    @classmethod
    def from_dict(cls, sd):
        return cls(**sd)

    def to_dict(self):
        return {
            'tau': self.tau,
            'c': self.c,
            'memory': self.memory,
            'initial_curvature': self.initial_curvature,
            'curvature_min': self.curvature_min,
            'curvature_max': self.curvature_max,
            'tol': self.tol,
            'max_iter': self.max_iter
        }


def npg_candidate(dc, z, grad, L):
    """Exact l1-l2 proximal step."""
    return l1l2_prox(z - grad / L, dc.mu1 / L, dc.mu2 / L)


def majorant_subgradient(z):
    """xi in the subdifferential of ||.|| at z: z/||z||, or 0 at the origin."""
    z_norm = float(torch.linalg.vector_norm(z))
    if z_norm == 0.0:
        return torch.zeros_like(z)
    return z / z_norm


def npg_major_candidate(dc, z, grad, L):
    """Soft-thresholding step on the majorized problem."""
    xi = majorant_subgradient(z)
    return soft_threshold(z - (grad - dc.mu2 * xi) / L, dc.mu1 / L)


def nonmonotone_minimize(dc, config, candidate_fn, name, log_interval=0, summary_writer=None):
    """Shared nonmonotone loop; `candidate_fn(dc, z, grad, L)` proposes z^{k+1}."""
    A = dc.A
    smooth = LeastSquaresTerm(A, dc.b)
    schedule = BarzilaiBorweinCurvature(A, initial=config.initial_curvature, increase_factor=config.tau,
                                        lower=config.curvature_min, upper=config.curvature_max)
    z = torch.zeros(dc.n, dtype=A.dtype)
    value, grad = smooth.value_and_gradient(z)
    h = value + dc.regularizer_value(z)
    history = [h]
    window = collections.deque([h], maxlen=config.memory + 1)
    curvatures = []
    displacement = None
    step_norm = float('nan')
    termination = MAX_ITER
    message = None
    iteration = 0

    start_time = time.perf_counter()
    try:
        while True:
            if displacement is not None and relative_to_value(step_norm, h) < config.tol:
                termination = CONVERGED
                break
            if iteration >= config.max_iter:
                break

            L = schedule.step(displacement)
            grad = ensure_finite(grad, 'gradient')
            reference = max(window)
            while True:
                candidate = candidate_fn(dc, z, grad, L)
                value, grad_candidate = smooth.value_and_gradient(candidate)
                h_candidate = ensure_finite(value + dc.regularizer_value(candidate), 'objective')
                diff = candidate - z
                if h_candidate <= reference - 0.5 * config.c * float(torch.dot(diff, diff)):
                    break
                L = schedule.increase()

            displacement = diff
            step_norm = float(torch.linalg.vector_norm(diff))
            z, h, grad = candidate, h_candidate, grad_candidate
            iteration += 1
            history.append(h)
            window.append(h)
            curvatures.append(L)

            if log_interval and iteration % log_interval == 0:
                print_rank_0(' iteration {:8d}/{:8d} | objective {:.6E} | step norm {:.6E} | '
                             'curvature {curvature:.3E} | backtracks {backtracks:d}'.format(
                                 iteration, config.max_iter, h, step_norm, **schedule.state_dict()))
            if summary_writer is not None:
                summary_writer.add_scalar(name + '/objective', h, iteration)
                summary_writer.add_scalar(name + '/curvature', L, iteration)
                summary_writer.add_scalar(name + '/backtracks', schedule.backtracks, iteration)
    except NumericError as error:
        termination = NUMERIC_ERROR
        message = str(error)
        logger.warning('%s stopped at iteration %d: %s', name, iteration, error)
    wall_time = time.perf_counter() - start_time

    residual = step_norm if displacement is not None else 0.0
    return RunReport(name, iteration, wall_time, h, h, residual, history, termination, solution=z,
                     step_sizes=curvatures, message=message)


def npg_minimize(dc, config=None, log_interval=0, summary_writer=None, name='npg'):
    if config is None:
        config = NpgConfig()
    return nonmonotone_minimize(dc, config, npg_candidate, name, log_interval=log_interval,
                                summary_writer=summary_writer)


def npg_major_minimize(dc, config=None, log_interval=0, summary_writer=None, name='npg_major'):
    if config is None:
        config = NpgConfig()
    return nonmonotone_minimize(dc, config, npg_major_candidate, name, log_interval=log_interval,
                                summary_writer=summary_writer)
