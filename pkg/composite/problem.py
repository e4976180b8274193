# coding=utf-8
"""Composite problems min f(x) + P(x) with smooth f and prox-friendly P."""

import torch

from .errors import InvalidInputError
from .numerics import DTYPE, as_vector
from .spectral import spectral_norm


class SmoothTerm:
    """Smooth part f of a composite objective.

    Subclasses implement `value`, `gradient` and `hess_vec`. All eigenvalues
    of the Hessian must lie in [-curvature_bound, curvature_bound].
    """

    def __init__(self, dim, curvature_bound=None):
        self.dim = int(dim)
        self._curvature_bound = None if curvature_bound is None else self._check_bound(curvature_bound)

    @staticmethod
    def _check_bound(curvature_bound):
        curvature_bound = float(curvature_bound)
        if not curvature_bound > 0:
            raise InvalidInputError('curvature bound must be positive, got {}'.format(curvature_bound))
        return curvature_bound

    @property
    def curvature_bound(self):
        if self._curvature_bound is None:
            self._curvature_bound = self._check_bound(self.estimate_curvature_bound())
        return self._curvature_bound

    def estimate_curvature_bound(self):
        raise NotImplementedError

    def value(self, x):
        raise NotImplementedError

    def gradient(self, x):
        raise NotImplementedError

    def hess_vec(self, x, v):
        raise NotImplementedError

    def value_and_gradient(self, x):
        return self.value(x), self.gradient(x)


class ProxableTerm:
    """Nonsmooth part P of a composite objective, accessed through its prox.

    `value` may return float('inf') outside the domain; `prox(tau, u)`
    returns argmin_y P(y) + ||y - u||^2 / (2 tau).
    """

    def __init__(self, dim):
        self.dim = int(dim)

    def value(self, x):
        raise NotImplementedError

    def prox(self, tau, u):
        raise NotImplementedError


class CompositeProblem:
    """The pair (f, P) over R^n."""

    def __init__(self, f, P, n=None):
        if n is None:
            n = f.dim
        if f.dim != n or P.dim != n:
            raise InvalidInputError('dimension mismatch: f has {}, P has {}, problem has {}'.format(
                f.dim, P.dim, n))
        self.f = f
        self.P = P
        self.n = int(n)

    @property
    def curvature_bound(self):
        return self.f.curvature_bound

    def check_point(self, x, name='x'):
        x = as_vector(x, name)
        if x.numel() != self.n:
            raise InvalidInputError('{} has dimension {}, expected {}'.format(name, x.numel(), self.n))
        return x

    def objective(self, x):
        """f(x) + P(x)."""
        return self.f.value(x) + self.P.value(x)

    def original_objective(self, x):
        """Objective of the problem the caller actually cares about.

        Plain composite problems report f + P; reformulated problems override this.
        """
        return self.objective(x)

    def zeros(self):
        return torch.zeros(self.n, dtype=DTYPE)


class QuadraticTerm(SmoothTerm):
    """f(x) = 1/2 x^T Q x - c^T x + const with symmetric Q."""

    def __init__(self, Q, c=None, const=0.0, curvature_bound=None):
        Q = torch.as_tensor(Q, dtype=DTYPE)
        if Q.dim() != 2 or Q.shape[0] != Q.shape[1]:
            raise InvalidInputError('Q must be square, got shape {}'.format(tuple(Q.shape)))
        n = Q.shape[0]
        Q = 0.5 * (Q + Q.t())
        if c is None:
            c = torch.zeros(n, dtype=DTYPE)
        if curvature_bound is None:
            curvature_bound = float(torch.linalg.eigvalsh(Q).abs().max())
            curvature_bound = max(curvature_bound, 1e-12)
        super(QuadraticTerm, self).__init__(n, curvature_bound)
        self.Q = Q
        self.c = as_vector(c, 'c')
        self.const = float(const)

    @classmethod
    def shifted_identity(cls, center):
        """f(x) = 1/2 ||x - center||^2."""
        center = as_vector(center, 'center')
        n = center.numel()
        return cls(torch.eye(n, dtype=DTYPE), center, 0.5 * float(torch.dot(center, center)),
                   curvature_bound=1.0)

    def value(self, x):
        return 0.5 * float(torch.dot(x, torch.mv(self.Q, x))) - float(torch.dot(self.c, x)) + self.const

    def gradient(self, x):
        return torch.mv(self.Q, x) - self.c

    def hess_vec(self, x, v):
        return torch.mv(self.Q, v)


class LeastSquaresTerm(SmoothTerm):
    """f(z) = 1/2 ||A z - b||^2.

    Without `lambda_max` the curvature bound is estimated by power iteration
    on first access.
    """

    def __init__(self, A, b, lambda_max=None):
        A = torch.as_tensor(A, dtype=DTYPE)
        b = as_vector(b, 'b')
        if A.dim() != 2 or A.shape[0] != b.numel():
            raise InvalidInputError('A has shape {} but b has length {}'.format(tuple(A.shape), b.numel()))
        super(LeastSquaresTerm, self).__init__(A.shape[1], lambda_max)
        self.A = A
        self.b = b

    def estimate_curvature_bound(self):
        return spectral_norm(self.A)

    def value(self, x):
        r = torch.mv(self.A, x) - self.b
        return 0.5 * float(torch.dot(r, r))

    def gradient(self, x):
        return torch.mv(self.A.t(), torch.mv(self.A, x) - self.b)

    def value_and_gradient(self, x):
        r = torch.mv(self.A, x) - self.b
        return 0.5 * float(torch.dot(r, r)), torch.mv(self.A.t(), r)

    def hess_vec(self, x, v):
        return torch.mv(self.A.t(), torch.mv(self.A, v))
