# coding=utf-8
"""Line-search descent on the forward-backward envelope."""

import logging
import time

import torch

from composite.envelope import FbePoint
from composite.errors import InvalidInputError, NumericError, UnsupportedFeatureError
from composite.lifting import LiftedProblem, coercivity_precheck
from utils import print_rank_0

from .lbfgs import LbfgsMemory, lbfgs_direction
from .line_search import LineSearchConfig, armijo_search, gate_direction, is_gradient_related
from .report import CONVERGED, MAX_ITER, NUMERIC_ERROR, RunReport

logger = logging.getLogger(__name__)

DIRECTIONS = ('lbfgs', 'steepest')

# Relative rounding slack for the per-step decrease bounds checked in debug mode.
DEBUG_SLACK = 1e-12


def decrease_bounds(config, alpha, g_norm, step_norm):
    """Upper bounds on F(x^{k+1}) - F(x^k) implied by the gate and Armijo conditions."""
    scale = config.c1 * config.sigma * alpha
    return -scale / config.c2 * g_norm ** 2, -scale / config.c2 ** 3 * step_norm ** 2


def check_level_bounded(problem):
    if isinstance(problem, LiftedProblem):
        check = coercivity_precheck(problem.dc)
        if not check.passed:
            raise InvalidInputError('envelope may not be level bounded: {}'.format(check.reason))


def fbe_lbfgs_minimize(problem, gamma, config=None, direction='lbfgs', x0=None, debug=False,
                       log_interval=0, summary_writer=None, name='fbe_lbfgs'):
    """Minimize F_gamma from x0 (the origin by default).

    Each iteration takes a candidate direction (L-BFGS or steepest descent),
    replaces it by -grad F_gamma when it fails the angle or norm condition,
    and backtracks until the Armijo condition holds. Numeric failures end the
    run with termination 'numeric_error' at the last accepted iterate.
    """
    if config is None:
        config = LineSearchConfig()
    if direction not in DIRECTIONS:
        raise UnsupportedFeatureError('unknown direction {!r}, choose from {}'.format(direction, DIRECTIONS))
    check_level_bounded(problem)
    if x0 is None:
        x0 = problem.zeros()

    memory = LbfgsMemory(config.memory)
    history = []
    step_sizes = []
    fallbacks = 0
    violations = 0
    termination = MAX_ITER
    message = None
    iteration = 0
    point = None

    start_time = time.perf_counter()
    try:
        point = FbePoint(problem, x0, gamma)
        history.append(point.fbe)
        while True:
            g = point.fbe_grad
            if point.relative_gradient_norm() < config.tol:
                termination = CONVERGED
                break
            if iteration >= config.max_iter:
                break

            if direction == 'lbfgs':
                candidate = -lbfgs_direction(memory, g)
                if not is_gradient_related(g, candidate, config.c1, config.c2):
                    fallbacks += 1
                    logger.debug('iteration %d: L-BFGS direction rejected, using steepest descent', iteration)
            else:
                candidate = -g
            d = gate_direction(g, candidate, config.c1, config.c2)

            alpha, trial, _ = armijo_search(point, d, config)

            if debug:
                g_norm = float(torch.linalg.vector_norm(g))
                step_norm = float(torch.linalg.vector_norm(trial.x - point.x))
                bound_g, bound_x = decrease_bounds(config, alpha, g_norm, step_norm)
                decrease = trial.fbe - point.fbe
                slack = DEBUG_SLACK * max(1.0, abs(point.fbe))
                if decrease > bound_g + slack or decrease > bound_x + slack:
                    violations += 1
                    logger.warning('iteration %d: decrease %.6e exceeds bounds %.6e / %.6e',
                                   iteration, decrease, bound_g, bound_x)

            if direction == 'lbfgs':
                memory.push(trial.x - point.x, trial.fbe_grad - g)
            point = trial
            iteration += 1
            history.append(point.fbe)
            step_sizes.append(alpha)

            if log_interval and iteration % log_interval == 0:
                print_rank_0(' iteration {:8d}/{:8d} | F_gamma {:.6E} | grad norm {:.6E} | '
                             'residual {:.6E} | step {:.3E}'.format(iteration, config.max_iter, point.fbe,
                                                                    point.fbe_grad_norm, point.residual, alpha))
            if summary_writer is not None:
                summary_writer.add_scalar(name + '/fbe', point.fbe, iteration)
                summary_writer.add_scalar(name + '/grad_norm', point.fbe_grad_norm, iteration)
                summary_writer.add_scalar(name + '/step', alpha, iteration)
    except NumericError as error:
        termination = NUMERIC_ERROR
        message = str(error)
        logger.warning('%s stopped at iteration %d: %s', name, iteration, error)
    wall_time = time.perf_counter() - start_time

    if point is None:
        # the starting point itself could not be evaluated
        x = problem.check_point(x0)
        return RunReport(name, 0, wall_time, float('nan'), float('nan'), float('nan'), [float('nan')],
                         termination, solution=x, message=message)

    return RunReport(name, iteration, wall_time, point.fbe, problem.original_objective(point.x), point.residual,
                     history, termination, solution=point.x, step_sizes=step_sizes,
                     steepest_fallbacks=fallbacks, debug_violations=violations, message=message)
