# coding=utf-8
"""Direction gating and Armijo backtracking on the forward-backward envelope."""

import logging

import torch

from composite.envelope import FbePoint
from composite.errors import InvalidInputError, LineSearchError, NumericError

logger = logging.getLogger(__name__)


class LineSearchConfig:
    """Parameters of the envelope line-search method.

    Arguments:
        sigma: Armijo sufficient-decrease constant in (0, 1).
        eta: backtracking factor in (0, 1).
        c1: angle-condition constant in (0, 1).
        c2: norm-condition constant, at least 1.
        tol: stop when ||grad F_gamma|| / max(1, F_gamma) < tol.
        max_iter: iteration cap.
        max_backtracks: backtracking cap before the search is declared failed.
        memory: number of L-BFGS curvature pairs kept.
    """

    def __init__(self, sigma=1e-4, eta=0.5, c1=1e-5, c2=1e5, tol=1e-6, max_iter=10 ** 6,
                 max_backtracks=60, memory=10):
        if not 0.0 < sigma < 1.0:
            raise InvalidInputError('sigma must lie in (0, 1), got {}'.format(sigma))
        if not 0.0 < eta < 1.0:
            raise InvalidInputError('eta must lie in (0, 1), got {}'.format(eta))
        if not 0.0 < c1 < 1.0 <= c2:
            raise InvalidInputError('need 0 < c1 < 1 <= c2, got c1={}, c2={}'.format(c1, c2))
        if not tol > 0:
            raise InvalidInputError('tol must be positive, got {}'.format(tol))
        if max_iter < 0 or max_backtracks < 0 or memory < 0:
            raise InvalidInputError('max_iter, max_backtracks and memory must be nonnegative')
        self.sigma = float(sigma)
        self.eta = float(eta)
        self.c1 = float(c1)
        self.c2 = float(c2)
        self.tol = float(tol)
        self.max_iter = int(max_iter)
        self.max_backtracks = int(max_backtracks)
        self.memory = int(memory)

    @classmethod
    def from_args(cls, args, tol=None):
        return cls(sigma=args.sigma, eta=args.eta, c1=args.c1, c2=args.c2,
                   tol=args.fbe_tol if tol is None else tol, max_iter=args.max_iter,
                   max_backtracks=args.max_backtracks, memory=args.lbfgs_memory)

    @classmethod
    def from_dict(cls, sd):
        return cls(**sd)

    def to_dict(self):
        return {
            'sigma': self.sigma,
            'eta': self.eta,
            'c1': self.c1,
            'c2': self.c2,
            'tol': self.tol,
            'max_iter': self.max_iter,
            'max_backtracks': self.max_backtracks,
            'memory': self.memory
        }


def is_gradient_related(g, d, c1, c2):
    """Angle condition <g, d> <= -c1 ||g|| ||d|| and ||g||/c2 <= ||d|| <= c2 ||g||."""
    g_norm = float(torch.linalg.vector_norm(g))
    d_norm = float(torch.linalg.vector_norm(d))
    angle_ok = float(torch.dot(g, d)) <= -c1 * g_norm * d_norm
    norm_ok = g_norm / c2 <= d_norm <= c2 * g_norm
    return angle_ok and norm_ok


def gate_direction(g, d_cand, c1=1e-5, c2=1e5):
    """Return d_cand when it is gradient related, otherwise -g.

    A zero gradient yields the zero direction.
    """
    if not bool((g != 0).any()):
        return torch.zeros_like(g)
    if d_cand is not None and is_gradient_related(g, d_cand, c1, c2):
        return d_cand
    return -g


def armijo_search(point, d, config=None):
    """Largest alpha in {1, eta, eta^2, ...} with
    F(x + alpha d) <= F(x) + sigma alpha <grad F(x), d>.

    Returns (alpha, next_point, backtracks). Trial points whose evaluation
    overflows count as rejections.
    """
    if config is None:
        config = LineSearchConfig()
    slope = float(torch.dot(point.fbe_grad, d))
    if not bool((d != 0).any()):
        return 1.0, point, 0
    if slope >= 0:
        raise LineSearchError('search direction is not a descent direction (slope {:.3e})'.format(slope))

    alpha = 1.0
    for backtracks in range(config.max_backtracks + 1):
        try:
            trial = FbePoint(point.problem, point.x + alpha * d, point.gamma)
        except NumericError as error:
            logger.debug('trial step %.3e rejected: %s', alpha, error)
        else:
            if trial.fbe <= point.fbe + config.sigma * alpha * slope:
                return alpha, trial, backtracks
        alpha *= config.eta
    raise LineSearchError('Armijo condition not met after {} backtracks (F={:.6e}, slope={:.3e})'.format(
        config.max_backtracks, point.fbe, slope))
