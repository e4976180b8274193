# coding=utf-8
"""Largest eigenvalue of A^T A by power iteration."""

import logging

import torch

from .errors import ConvergenceError, InvalidInputError
from .numerics import DTYPE

logger = logging.getLogger(__name__)

# Quotient increments below this multiple of the quotient are rounding noise.
ROUNDING_FLOOR = 64 * torch.finfo(DTYPE).eps
# The tail estimate must reach this fraction of tol before stopping.
TAIL_SAFETY = 0.1
# Successive increment ratios must agree to this fraction of 1 - q.
RATIO_AGREEMENT = 0.1


def start_vector(n):
    """Deterministic start: all ones plus a tiny index-dependent perturbation."""
    index = torch.arange(1, n + 1, dtype=DTYPE)
    v = torch.ones(n, dtype=DTYPE) + 1e-3 * index / n
    return v / torch.linalg.vector_norm(v)


def increment_ratio(step, previous):
    """step / previous when both increments are positive and shrinking, else None."""
    if previous is None or not previous > 0 or not step > 0:
        return None
    ratio = step / previous
    return ratio if ratio < 1.0 else None


def spectral_norm(A, tol=1e-6, max_iter=5000):
    """Return lambda_max(A^T A), the squared spectral norm of A.

    Iterates v <- A^T A v / ||A^T A v||. The Rayleigh quotients increase
    towards lambda_max and their increments shrink geometrically, so the
    remaining error after an increment d_k with ratio q = d_k / d_{k-1} is
    about d_k q / (1 - q). Iteration stops once that tail is below
    TAIL_SAFETY * tol times the quotient and returns the quotient plus the
    tail. The tail is trusted only once two successive ratios agree, since the
    first increments also carry the fast-decaying components. Increments at
    rounding level stop the iteration too.
    """
    A = torch.as_tensor(A, dtype=DTYPE)
    if A.dim() != 2:
        raise InvalidInputError('A must be a matrix, got shape {}'.format(tuple(A.shape)))
    tol = float(tol)
    if not tol > 0:
        raise InvalidInputError('tol must be positive, got {}'.format(tol))
    if A.numel() == 0 or not bool((A != 0).any()):
        raise InvalidInputError('A must be nonzero')

    v = start_vector(A.shape[1])
    estimate = None
    previous = None
    previous_ratio = None
    for iteration in range(1, max_iter + 1):
        w = torch.mv(A.t(), torch.mv(A, v))
        current = float(torch.dot(v, w))
        w_norm = float(torch.linalg.vector_norm(w))
        if w_norm == 0.0:
            # start vector in the null space; restart from a coordinate vector
            v = torch.zeros_like(v)
            v[iteration % v.numel()] = 1.0
            estimate, previous, previous_ratio = None, None, None
            continue
        v = w / w_norm
        if estimate is None:
            estimate = current
            continue
        step = current - estimate
        estimate = current
        if abs(step) <= ROUNDING_FLOOR * abs(current):
            logger.debug('power iteration reached rounding level after %d iterations: %.12g', iteration, current)
            return current
        ratio = increment_ratio(step, previous)
        if ratio is not None and previous_ratio is not None \
                and abs(ratio - previous_ratio) <= RATIO_AGREEMENT * (1.0 - ratio):
            tail = step * ratio / (1.0 - ratio)
            if tail <= TAIL_SAFETY * tol * current:
                logger.debug('power iteration converged after %d iterations: %.12g (tail %.3e)',
                             iteration, current + tail, tail)
                return current + tail
        previous, previous_ratio = step, ratio
    raise ConvergenceError('power iteration did not converge in {} iterations'.format(max_iter),
                           estimate=estimate)
