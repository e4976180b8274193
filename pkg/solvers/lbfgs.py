# coding=utf-8
"""Limited-memory BFGS inverse-Hessian products."""

import collections
import logging

import torch

logger = logging.getLogger(__name__)


class LbfgsMemory:
    """Ring buffer of curvature pairs (s, y).

    Pairs with <s, y> <= skip_threshold * ||s|| ||y|| are discarded on
    insertion so that every stored pair keeps the implicit inverse Hessian
    positive definite.
    """

    def __init__(self, capacity=10, skip_threshold=1e-12):
        self.capacity = int(capacity)
        self.skip_threshold = float(skip_threshold)
        self.pairs = collections.deque(maxlen=self.capacity)
        self.skipped = 0

    def __len__(self):
        return len(self.pairs)

    def push(self, s, y):
        """Store (s, y) if it has enough curvature; returns whether it was kept."""
        if self.capacity == 0:
            return False
        sy = float(torch.dot(s, y))
        if sy <= self.skip_threshold * float(torch.linalg.vector_norm(s)) * float(torch.linalg.vector_norm(y)):
            self.skipped += 1
            logger.debug('skipping curvature pair with <s, y> = %.3e', sy)
            return False
        self.pairs.append((s, y, 1.0 / sy))
        return True

    def reset(self):
        self.pairs.clear()

    @property
    def scaling(self):
        """<s, y> / <y, y> of the most recent pair, 1 when empty."""
        if not self.pairs:
            return 1.0
        s, y, rho = self.pairs[-1]
        return 1.0 / (rho * float(torch.dot(y, y)))


def lbfgs_direction(memory, g):
    """Two-loop recursion: returns H g for the L-BFGS inverse Hessian H.

    The search direction candidate is the negative of the result.
    """
    q = g.clone()
    alphas = []
    for s, y, rho in reversed(memory.pairs):
        alpha = rho * float(torch.dot(s, q))
        q.add_(y, alpha=-alpha)
        alphas.append(alpha)
    r = memory.scaling * q
    for (s, y, rho), alpha in zip(memory.pairs, reversed(alphas)):
        beta = rho * float(torch.dot(y, r))
        r.add_(s, alpha=alpha - beta)
    return r
