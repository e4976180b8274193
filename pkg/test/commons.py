# coding=utf-8

import random

import numpy
import torch

from composite.lifting import DcLeastSquares, lift
from composite.numerics import DTYPE
from composite.problem import CompositeProblem, QuadraticTerm
from composite.prox import L1Norm, ZeroTerm
from data_utils.instances import GAUSSIAN, InstanceSpec, gen_gaussian


def set_random_seed(seed):
    """Set random seed for reproducability."""
    random.seed(seed)
    numpy.random.seed(seed)
    torch.manual_seed(seed)


def print_separator(message):
    filler_len = (78 - len(message)) // 2
    filler = '-' * filler_len
    string = '\n' + filler + ' {} '.format(message) + filler
    print(string, flush=True)


def vector(*values):
    return torch.tensor(values, dtype=DTYPE)


def half_squared_norm_problem(n=1):
    """f = 1/2 ||x||^2, P = 0."""
    return CompositeProblem(QuadraticTerm(torch.eye(n, dtype=DTYPE), curvature_bound=1.0), ZeroTerm(n))


def shifted_problem(center, P=None):
    """f = 1/2 ||x - center||^2 with P = 0 unless given."""
    f = QuadraticTerm.shifted_identity(center)
    return CompositeProblem(f, P if P is not None else ZeroTerm(f.dim))


def random_quadratic_l1(n, weight=1.0, generator=None):
    """Indefinite random quadratic plus weight * ||x||_1."""
    B = torch.randn(n, n, generator=generator, dtype=DTYPE)
    Q = 0.5 * (B + B.t())
    c = torch.randn(n, generator=generator, dtype=DTYPE)
    return CompositeProblem(QuadraticTerm(Q, c), L1Norm(n, weight))


def random_dc(m, n, mu1, mu2, generator=None):
    A = torch.randn(m, n, generator=generator, dtype=DTYPE)
    b = torch.randn(m, generator=generator, dtype=DTYPE)
    return DcLeastSquares(A, b, mu1, mu2)


def exact_lambda_max(A):
    A = torch.as_tensor(A, dtype=DTYPE)
    return float(torch.linalg.eigvalsh(A.t() @ A)[-1])


def gaussian_lifted(m, n, s, mu, seed=1):
    """Seeded Gaussian instance, its l1-l2 problem and the exact lifting."""
    instance = gen_gaussian(InstanceSpec(GAUSSIAN, m, n, s, sigma=1e-2, seed=seed))
    dc = instance.to_problem(mu, mu)
    return instance, dc, lift(dc, exact_lambda_max(dc.A))


def random_unit_nonnegative(count, n, generator=None):
    """Samples on the nonnegative part of the unit sphere."""
    X = torch.rand(count, n, generator=generator, dtype=DTYPE)
    return X / torch.linalg.vector_norm(X, dim=1, keepdim=True)


def relative_error(a, b):
    a = torch.as_tensor(a, dtype=DTYPE)
    b = torch.as_tensor(b, dtype=DTYPE)
    return float(torch.linalg.vector_norm(a - b)) / max(1.0, float(torch.linalg.vector_norm(b)))
