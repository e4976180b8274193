# coding=utf-8
"""Seeded random sparse-recovery instances.

Two families are supported: Gaussian matrices with unit-norm columns and
randomly over-sampled partial DCT matrices, whose adjacent columns are
strongly correlated. Streams come from numpy's PCG64 so a seed fixes the
instance on every platform.
"""

import logging
import math

import numpy as np
import torch

from composite.errors import InvalidInputError, UnsupportedFeatureError
from composite.lifting import DcLeastSquares

logger = logging.getLogger(__name__)

GAUSSIAN = 'gaussian_unit_columns'
DCT = 'oversampled_dct'
FAMILIES = (GAUSSIAN, DCT)


class InstanceSpec:
    """Family, dimensions, noise level and seed of one random instance."""

    def __init__(self, family, m, n, s, sigma=1e-2, F=20, seed=1):
        if family not in FAMILIES:
            raise UnsupportedFeatureError('unknown instance family {!r}, choose from {}'.format(family, FAMILIES))
        m, n, s, F, seed = int(m), int(n), int(s), int(F), int(seed)
        if m < 1 or n < 1:
            raise InvalidInputError('m and n must be positive, got m={}, n={}'.format(m, n))
        if not 0 < s <= n:
            raise InvalidInputError('need 0 < s <= n, got s={}, n={}'.format(s, n))
        if F < 1:
            raise InvalidInputError('F must be at least 1, got {}'.format(F))
        if sigma < 0:
            raise InvalidInputError('sigma must be nonnegative, got {}'.format(sigma))
        if not 0 <= seed < 2 ** 64:
            raise InvalidInputError('seed must be a 64-bit unsigned integer, got {}'.format(seed))
        if m > n:
            logger.warning('m=%d exceeds n=%d: outside the compressed-sensing regime', m, n)
        self.family = family
        self.m = m
        self.n = n
        self.s = s
        self.sigma = float(sigma)
        self.F = F
        self.seed = seed

    def with_seed(self, seed):
        return InstanceSpec(self.family, self.m, self.n, self.s, self.sigma, self.F, seed)

    def key(self):
        """Sort key shared by all seeds of this spec."""
        return FAMILIES.index(self.family), self.m, self.n, self.s

    @property
    def name(self):
        prefix = 'dct' if self.family == DCT else 'gaussian'
        return '{}_m{}_n{}_s{}_seed{}'.format(prefix, self.m, self.n, self.s, self.seed)

    @classmethod
    def from_dict(cls, sd):
        return cls(**sd)

    def to_dict(self):
        return {
            'family': self.family,
            'm': self.m,
            'n': self.n,
            's': self.s,
            'sigma': self.sigma,
            'F': self.F,
            'seed': self.seed
        }

    def __eq__(self, other):
        return isinstance(other, InstanceSpec) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return 'InstanceSpec({})'.format(', '.join('{}={!r}'.format(k, v) for k, v in self.to_dict().items()))


class Instance:
    """Sensing matrix A, measurements b and the planted sparse signal.

    `w` holds the DCT sampling points and is None for the Gaussian family.
    """

    def __init__(self, spec, A, b, support, values, w=None):
        self.spec = spec
        self.A = np.ascontiguousarray(A, dtype=np.float64)
        self.b = np.ascontiguousarray(b, dtype=np.float64)
        self.support = np.ascontiguousarray(support, dtype=np.int64)
        self.values = np.ascontiguousarray(values, dtype=np.float64)
        self.w = None if w is None else np.ascontiguousarray(w, dtype=np.float64)
        if self.A.shape != (spec.m, spec.n) or self.b.shape != (spec.m,):
            raise InvalidInputError('instance arrays do not match {}'.format(spec))
        if self.support.shape != (spec.s,) or self.values.shape != (spec.s,):
            raise InvalidInputError('ground truth must have {} entries'.format(spec.s))

    def ground_truth(self):
        x = np.zeros(self.spec.n)
        x[self.support] = self.values
        return x

    def to_problem(self, mu1, mu2=None):
        """The l1-l2 least squares problem on this instance (mu2 defaults to mu1)."""
        if mu2 is None:
            mu2 = mu1
        return DcLeastSquares(torch.from_numpy(self.A), torch.from_numpy(self.b), mu1, mu2)


def dct_matrix(w, n, F=20):
    """Columns cos(2 pi j w / F) / sqrt(m) for j = 1, ..., n."""
    w = np.asarray(w, dtype=np.float64)
    m = w.shape[0]
    j = np.arange(1, n + 1, dtype=np.float64)
    return np.cos(2.0 * np.pi * np.outer(w, j) / F) / math.sqrt(m)


def _planted_signal(rng, A, spec):
    support = np.sort(rng.choice(spec.n, size=spec.s, replace=False))
    values = rng.standard_normal(spec.s)
    noise = rng.standard_normal(spec.m)
    b = A[:, support] @ values + spec.sigma * noise
    return support, values, b


def gen_gaussian(spec):
    if spec.family != GAUSSIAN:
        raise InvalidInputError('gen_gaussian needs family {!r}, got {!r}'.format(GAUSSIAN, spec.family))
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    A = rng.standard_normal((spec.m, spec.n))
    A /= np.linalg.norm(A, axis=0)
    support, values, b = _planted_signal(rng, A, spec)
    return Instance(spec, A, b, support, values)


def gen_dct(spec, w=None):
    """Over-sampled partial DCT instance; `w` overrides the sampled points."""
    if spec.family != DCT:
        raise InvalidInputError('gen_dct needs family {!r}, got {!r}'.format(DCT, spec.family))
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    sampled = rng.uniform(0.0, 1.0, size=spec.m)
    if w is None:
        w = sampled
    else:
        w = np.asarray(w, dtype=np.float64)
        if w.shape != (spec.m,):
            raise InvalidInputError('w must have {} entries, got shape {}'.format(spec.m, w.shape))
    A = dct_matrix(w, spec.n, spec.F)
    support, values, b = _planted_signal(rng, A, spec)
    return Instance(spec, A, b, support, values, w=w)


def generate_instance(spec):
    if spec.family == GAUSSIAN:
        return gen_gaussian(spec)
    return gen_dct(spec)


def adjacent_column_correlation(A):
    """Mean absolute cosine between consecutive columns of A."""
    A = np.asarray(A, dtype=np.float64)
    norms = np.linalg.norm(A, axis=0)
    cosines = np.sum(A[:, :-1] * A[:, 1:], axis=0) / (norms[:-1] * norms[1:])
    return float(np.mean(np.abs(cosines)))
