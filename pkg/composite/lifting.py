# coding=utf-8
"""Lifting of l1-l2 regularized least squares to a composite problem.

The original objective is

    J(z) = 1/2 ||A z - b||^2 + mu1 ||z||_1 - mu2 ||z||.

Writing -||z|| = min_{||y|| <= 1} -<y, z> gives an equivalent problem on the
product space (y, z) with smooth part f(y, z) = 1/2 ||A z - b||^2 - mu2 <y, z>
and separable nonsmooth part P(y, z) = mu1 ||z||_1 + indicator_B(y).
"""

import collections
import logging
import math

import torch

from .errors import InvalidInputError, UnsupportedFeatureError
from .numerics import DTYPE, as_vector
from .problem import CompositeProblem, SmoothTerm
from .prox import BlockSeparableTerm, L1L2ProxParams, L1Norm, UnitBallIndicator
from .spectral import spectral_norm

logger = logging.getLogger(__name__)

L1_MINUS_L2 = 'l1_minus_l2'
REGULARIZERS = (L1_MINUS_L2,)

CoercivityCheck = collections.namedtuple('CoercivityCheck', ['passed', 'reason'])


class DcLeastSquares:
    """Data (A, b, mu1, mu2) of an l1-l2 regularized least squares problem."""

    def __init__(self, A, b, mu1, mu2, regularizer=L1_MINUS_L2):
        if regularizer not in REGULARIZERS:
            raise UnsupportedFeatureError('regularizer {!r} is not supported, choose from {}'.format(
                regularizer, REGULARIZERS))
        A = torch.as_tensor(A, dtype=DTYPE)
        b = as_vector(b, 'b')
        if A.dim() != 2 or A.shape[0] != b.numel():
            raise InvalidInputError('A has shape {} but b has length {}'.format(tuple(A.shape), b.numel()))
        params = L1L2ProxParams(mu1, mu2)
        self.A = A
        self.b = b
        self.mu1 = params.mu1
        self.mu2 = params.mu2
        self.regularizer = regularizer

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def n(self):
        return self.A.shape[1]

    def least_squares(self, z):
        r = torch.mv(self.A, z) - self.b
        return 0.5 * float(torch.dot(r, r))

    def regularizer_value(self, z):
        return self.mu1 * float(z.abs().sum()) - self.mu2 * float(torch.linalg.vector_norm(z))


class ProductVar:
    """A point (y, z) of the lifted space, stored as the concatenation [y; z]."""

    def __init__(self, y, z):
        y = as_vector(y, 'y')
        z = as_vector(z, 'z')
        if y.numel() != z.numel():
            raise InvalidInputError('blocks must have equal size, got {} and {}'.format(y.numel(), z.numel()))
        self.y = y
        self.z = z

    @classmethod
    def split(cls, x):
        x = as_vector(x, 'x')
        if x.numel() % 2:
            raise InvalidInputError('lifted vector must have even length, got {}'.format(x.numel()))
        n = x.numel() // 2
        return cls(x[:n], x[n:])

    def join(self):
        return torch.cat([self.y, self.z])

    @property
    def n(self):
        return self.z.numel()


def curvature_bound(lambda_max, mu2):
    """L = (lambda_max + sqrt(lambda_max^2 + 4 mu2^2)) / 2.

    Every eigenvalue of [[0, -mu2 I], [-mu2 I, A^T A]] lies in [-L, L].
    """
    lambda_max = float(lambda_max)
    mu2 = float(mu2)
    if lambda_max < 0:
        raise InvalidInputError('lambda_max must be nonnegative, got {}'.format(lambda_max))
    if not mu2 > 0:
        raise InvalidInputError('mu2 must be positive, got {}'.format(mu2))
    return 0.5 * (lambda_max + math.sqrt(lambda_max * lambda_max + 4.0 * mu2 * mu2))


def j_value(dc, z):
    z = as_vector(z, 'z')
    return dc.least_squares(z) + dc.regularizer_value(z)


def coercivity_precheck(dc):
    """Sufficient condition for a level-bounded lifted envelope."""
    if dc.regularizer != L1_MINUS_L2:
        raise UnsupportedFeatureError('no coercivity check for regularizer {!r}'.format(dc.regularizer))
    if dc.mu1 > dc.mu2:
        return CoercivityCheck(True, 'mu1 > mu2: the l1 part dominates')
    column_norms = torch.linalg.vector_norm(dc.A, dim=0)
    zero_columns = torch.nonzero(column_norms == 0).flatten().tolist()
    if zero_columns:
        return CoercivityCheck(False, 'mu1 == mu2 and A has zero columns at indices {}'.format(zero_columns[:10]))
    return CoercivityCheck(True, 'mu1 == mu2 and every column of A is nonzero')


def recover_dual(z):
    """The y that makes the lifted objective equal J(z): z/||z||, or e_1 when z = 0."""
    z = as_vector(z, 'z')
    z_norm = float(torch.linalg.vector_norm(z))
    if z_norm > 0:
        return z / z_norm
    y = torch.zeros_like(z)
    y[0] = 1.0
    return y


class LiftedSmoothTerm(SmoothTerm):
    """f(y, z) = 1/2 ||A z - b||^2 - mu2 <y, z> on the stacked vector [y; z]."""

    def __init__(self, dc, L):
        super(LiftedSmoothTerm, self).__init__(2 * dc.n, L)
        self.dc = dc
        self.n = dc.n

    def _blocks(self, x):
        return x[:self.n], x[self.n:]

    def value(self, x):
        y, z = self._blocks(x)
        return self.dc.least_squares(z) - self.dc.mu2 * float(torch.dot(y, z))

    def gradient(self, x):
        return self.value_and_gradient(x)[1]

    def value_and_gradient(self, x):
        y, z = self._blocks(x)
        dc = self.dc
        r = torch.mv(dc.A, z) - dc.b
        value = 0.5 * float(torch.dot(r, r)) - dc.mu2 * float(torch.dot(y, z))
        grad = torch.cat([-dc.mu2 * z, torch.mv(dc.A.t(), r) - dc.mu2 * y])
        return value, grad

    def hess_vec(self, x, v):
        u, w = self._blocks(v)
        A = self.dc.A
        return torch.cat([-self.dc.mu2 * w, torch.mv(A.t(), torch.mv(A, w)) - self.dc.mu2 * u])


class LiftedProblem(CompositeProblem):
    """Composite problem over [y; z] whose original objective is J of the z-block."""

    def __init__(self, dc, lambda_max):
        L = curvature_bound(lambda_max, dc.mu2)
        f = LiftedSmoothTerm(dc, L)
        P = BlockSeparableTerm([UnitBallIndicator(dc.n), L1Norm(dc.n, dc.mu1)])
        super(LiftedProblem, self).__init__(f, P)
        self.dc = dc
        self.lambda_max = float(lambda_max)

    def original_objective(self, x):
        return j_value(self.dc, ProductVar.split(x).z)

    def recover(self, x):
        """Read the z answer off a lifted point, paired with its best y."""
        z = ProductVar.split(x).z
        return ProductVar(recover_dual(z), z)


def lift(dc, lambda_max=None):
    """Build the lifted composite problem; computes lambda_max(A^T A) when not given."""
    if dc.regularizer != L1_MINUS_L2:
        raise UnsupportedFeatureError('cannot lift regularizer {!r}'.format(dc.regularizer))
    if lambda_max is None:
        lambda_max = spectral_norm(dc.A)
    problem = LiftedProblem(dc, lambda_max)
    logger.debug('lifted problem with n=%d, lambda_max=%.6g, L=%.6g', dc.n, problem.lambda_max,
                 problem.curvature_bound)
    return problem


def lifted_objective(dc, y, z):
    """f(y, z) + P(y, z); +inf when ||y|| > 1."""
    point = ProductVar(y, z)
    problem = LiftedProblem(dc, 0.0)
    return problem.objective(point.join())
