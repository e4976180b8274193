# coding=utf-8
"""Closed-form proximal operators and the prox terms built on them."""

import torch

from .errors import InvalidInputError
from .numerics import as_vector
from .problem import ProxableTerm


def soft_threshold(y, tau):
    """Componentwise sign(y_i) * max(|y_i| - tau, 0), the prox of tau*||.||_1."""
    tau = float(tau)
    if tau < 0:
        raise InvalidInputError('threshold must be nonnegative, got {}'.format(tau))
    y = as_vector(y, 'y')
    return torch.sign(y) * torch.clamp(y.abs() - tau, min=0.0)


def project_unit_ball(y):
    """Euclidean projection onto the closed unit ball B(0, 1)."""
    y = as_vector(y, 'y')
    radius = float(torch.linalg.vector_norm(y))
    if radius <= 1.0:
        return y.clone()
    return y / radius


def moreau_value(term, gamma, u):
    """P^gamma(u) = P(p) + ||p - u||^2 / (2 gamma) with p = prox_{gamma P}(u)."""
    gamma = float(gamma)
    if not gamma > 0:
        raise InvalidInputError('gamma must be positive, got {}'.format(gamma))
    u = as_vector(u, 'u')
    p = term.prox(gamma, u)
    diff = p - u
    return term.value(p) + float(torch.dot(diff, diff)) / (2.0 * gamma)


def sphere_linear_min(v):
    """Minimize <v, x> over the nonnegative part of the unit sphere.

    When some v_i < 0 the minimizer is supported on those indices and
    proportional to -v there; otherwise it is the coordinate vector at the
    first index attaining min(v).
    """
    v = as_vector(v, 'v')
    if v.numel() < 1:
        raise InvalidInputError('v must have at least one entry')
    x = torch.zeros_like(v)
    negative = v < 0
    if bool(negative.any()):
        v_neg = v[negative]
        x[negative] = -v_neg / torch.linalg.vector_norm(v_neg)
    else:
        # torch.argmin returns the lowest index among ties
        x[int(torch.argmin(v))] = 1.0
    return x


class L1L2ProxParams:
    """Weights of 1/2||x - y||^2 + mu1 ||x||_1 - mu2 ||x||."""

    def __init__(self, mu1, mu2):
        mu1, mu2 = float(mu1), float(mu2)
        if not mu2 > 0:
            raise InvalidInputError('mu2 must be positive, got {}'.format(mu2))
        if mu1 < mu2:
            raise InvalidInputError('mu1 must be at least mu2, got mu1={} < mu2={}'.format(mu1, mu2))
        self.mu1 = mu1
        self.mu2 = mu2

    def objective(self, x, y):
        diff = x - y
        return (0.5 * float(torch.dot(diff, diff)) + self.mu1 * float(x.abs().sum())
                - self.mu2 * float(torch.linalg.vector_norm(x)))


def l1l2_prox(y, mu1, mu2):
    """Closed-form minimizer of 1/2||x - y||^2 + mu1 ||x||_1 - mu2 ||x||.

    Writing x = sign(y) * r * u with u >= 0, ||u|| = 1 reduces the problem to
    minimizing <mu1 e - |y|, u> over the nonnegative unit sphere, after which
    r = max(mu2 - <mu1 e - |y|, u>, 0).
    """
    params = L1L2ProxParams(mu1, mu2)
    y = as_vector(y, 'y')
    gap = params.mu1 - y.abs()
    u = sphere_linear_min(gap)
    radius = max(params.mu2 - float(torch.dot(gap, u)), 0.0)
    return torch.sign(y) * (radius * u)


class ZeroTerm(ProxableTerm):
    """P = 0."""

    def value(self, x):
        return 0.0

    def prox(self, tau, u):
        return u.clone()


class L1Norm(ProxableTerm):
    """P(x) = weight * ||x||_1."""

    def __init__(self, dim, weight=1.0):
        super(L1Norm, self).__init__(dim)
        self.weight = float(weight)

    def value(self, x):
        return self.weight * float(x.abs().sum())

    def prox(self, tau, u):
        return soft_threshold(u, tau * self.weight)


class UnitBallIndicator(ProxableTerm):
    """P = indicator of B(0, 1); the conjugate of the Euclidean norm."""

    def __init__(self, dim, slack=1e-12):
        super(UnitBallIndicator, self).__init__(dim)
        self.slack = slack

    def value(self, x):
        if float(torch.linalg.vector_norm(x)) <= 1.0 + self.slack:
            return 0.0
        return float('inf')

    def prox(self, tau, u):
        return project_unit_ball(u)


class L1L2Term(ProxableTerm):
    """P(x) = mu1 ||x||_1 - mu2 ||x||."""

    def __init__(self, dim, mu1, mu2):
        super(L1L2Term, self).__init__(dim)
        self.params = L1L2ProxParams(mu1, mu2)

    def value(self, x):
        return self.params.mu1 * float(x.abs().sum()) - self.params.mu2 * float(torch.linalg.vector_norm(x))

    def prox(self, tau, u):
        return l1l2_prox(u, tau * self.params.mu1, tau * self.params.mu2)


class BlockSeparableTerm(ProxableTerm):
    """P(x_1, ..., x_k) = sum_i P_i(x_i) over consecutive blocks of x."""

    def __init__(self, terms):
        self.terms = list(terms)
        self.sizes = [term.dim for term in self.terms]
        super(BlockSeparableTerm, self).__init__(sum(self.sizes))

    def split(self, x):
        return torch.split(x, self.sizes)

    def value(self, x):
        total = 0.0
        for term, block in zip(self.terms, self.split(x)):
            total += term.value(block)
        return total

    def prox(self, tau, u):
        return torch.cat([term.prox(tau, block) for term, block in zip(self.terms, self.split(u))])
