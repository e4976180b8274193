# coding=utf-8
"""Randomized property suites for the envelope, the prox toolbox and the lifting.

Each suite returns a SuiteResult; `run_suites` drives them for the `check`
command and the tests reuse the individual oracles.
"""

import collections
import logging

import numpy as np
import scipy.linalg
import torch

from composite.envelope import FbePoint
from composite.lifting import DcLeastSquares, curvature_bound, lift
from composite.numerics import DTYPE
from composite.problem import CompositeProblem, QuadraticTerm
from composite.prox import L1Norm, l1l2_prox
from data_utils.instances import GAUSSIAN, InstanceSpec, gen_gaussian

logger = logging.getLogger(__name__)

SuiteResult = collections.namedtuple('SuiteResult', ['name', 'passed', 'checked', 'worst', 'limit'])


def finite_difference_gradient(problem, x, gamma, h=1e-6):
    """Central differences of F_gamma along every coordinate."""
    grad = torch.zeros_like(x)
    for i in range(x.numel()):
        step = torch.zeros_like(x)
        step[i] = h
        plus = FbePoint(problem, x + step, gamma).fbe
        minus = FbePoint(problem, x - step, gamma).fbe
        grad[i] = (plus - minus) / (2.0 * h)
    return grad


def gradient_relative_error(problem, x, gamma, h=1e-6):
    analytic = FbePoint(problem, x, gamma).fbe_grad
    numeric = finite_difference_gradient(problem, x, gamma, h)
    return float(torch.linalg.vector_norm(analytic - numeric)) / max(1.0, float(torch.linalg.vector_norm(analytic)))


def l1l2_objective_batch(X, y, mu1, mu2):
    """1/2||x - y||^2 + mu1 ||x||_1 - mu2 ||x|| for every row x of X."""
    diff = X - y
    return (0.5 * (diff * diff).sum(dim=-1) + mu1 * X.abs().sum(dim=-1)
            - mu2 * torch.linalg.vector_norm(X, dim=-1))


def lifted_instance(m, n, s, mu1, mu2, seed):
    instance = gen_gaussian(InstanceSpec(GAUSSIAN, m, n, s, sigma=1e-2, seed=seed))
    dc = instance.to_problem(mu1, mu2)
    lambda_max = float(scipy.linalg.eigvalsh(instance.A.T @ instance.A, subset_by_index=[n - 1, n - 1])[0])
    return lift(dc, lambda_max)


def lift_problem_from_seed(m, n, mu, seed):
    return lifted_instance(m, n, max(1, n // 10), mu, mu, seed)


def random_problems(generator, count, quick):
    """Alternates lifted l1-l2 problems and random quadratic + l1 problems."""
    problems = []
    for index in range(count):
        if index % 2 == 0:
            mu = float(10 ** (-3 + 2 * torch.rand(1, generator=generator, dtype=DTYPE)))
            m, n = (10, 30) if quick else (20, 60)
            seed = int(torch.randint(1, 2 ** 31, (1,), generator=generator))
            problems.append(lift_problem_from_seed(m, n, mu, seed))
        else:
            n = 6
            B = torch.randn(n, n, generator=generator, dtype=DTYPE)
            Q = 0.5 * (B + B.t())
            c = torch.randn(n, generator=generator, dtype=DTYPE)
            problems.append(CompositeProblem(QuadraticTerm(Q, c), L1Norm(n, 0.5)))
    return problems


def check_gradient(generator, quick=False, instances=20, points=100, m=40, n=120, tol=1e-5):
    """Analytic envelope gradient against central finite differences."""
    if quick:
        instances, points, m, n = 2, 3, 10, 30
    worst = 0.0
    checked = 0
    for _ in range(instances):
        mu = float(10 ** (-3 + 2 * torch.rand(1, generator=generator, dtype=DTYPE)))
        seed = int(torch.randint(1, 2 ** 31, (1,), generator=generator))
        problem = lift_problem_from_seed(m, n, mu, seed)
        gamma = 0.95 / problem.curvature_bound
        for _ in range(points):
            x = 0.5 * torch.randn(problem.n, generator=generator, dtype=DTYPE)
            worst = max(worst, gradient_relative_error(problem, x, gamma))
            checked += 1
    return SuiteResult('gradient', worst <= tol, checked, worst, tol)


def check_prox(generator, quick=False, draws=10000, candidates=10000, tol=1e-10):
    """l1-l2 prox against random candidates, coordinate perturbations and grids."""
    if quick:
        draws, candidates = 200, 2000
    worst = 0.0
    for _ in range(draws):
        d = int(torch.randint(1, 6, (1,), generator=generator))
        y = 2.0 * torch.randn(d, generator=generator, dtype=DTYPE)
        mu2 = float(torch.rand(1, generator=generator, dtype=DTYPE)) + 1e-3
        mu1 = mu2 * (1.0 + float(torch.rand(1, generator=generator, dtype=DTYPE)))
        x = l1l2_prox(y, mu1, mu2)
        best = float(l1l2_objective_batch(x.unsqueeze(0), y, mu1, mu2)[0])

        scale = float(y.abs().max()) + 1.0
        pool = [scale * (2.0 * torch.rand(candidates, d, generator=generator, dtype=DTYPE) - 1.0),
                x + 0.1 * torch.randn(candidates, d, generator=generator, dtype=DTYPE)]
        eye = torch.eye(d, dtype=DTYPE)
        pool.append(torch.cat([x + 1e-4 * eye, x - 1e-4 * eye]))
        if d <= 2:
            axis = torch.linspace(-scale, scale, 401 if d == 2 else 20001, dtype=DTYPE)
            pool.append(torch.cartesian_prod(*([axis] * d)).reshape(-1, d))
        challengers = l1l2_objective_batch(torch.cat(pool), y, mu1, mu2)
        worst = max(worst, best - float(challengers.min()))
    return SuiteResult('prox', worst <= tol, draws, worst, tol)


def check_sandwich(generator, quick=False, instances=5, points=1000, tol=1e-9):
    """F(P(x)) <= (f + P)(P(x)) <= F(x) <= (f + P)(x), plus stationarity equivalence."""
    if quick:
        points = 50
    worst = -float('inf')
    checked = 0
    for problem in random_problems(generator, instances, quick):
        L = problem.curvature_bound
        gamma = 0.95 / L
        for _ in range(points):
            x = torch.randn(problem.n, generator=generator, dtype=DTYPE)
            point = FbePoint(problem, x, gamma)
            image = FbePoint(problem, point.backward, gamma)
            at_image = problem.objective(point.backward)
            at_x = problem.objective(x)
            slack = tol * max(1.0, abs(point.fbe))
            gaps = [image.fbe - at_image, at_image - point.fbe]
            if at_x != float('inf'):
                gaps.append(point.fbe - at_x)
            grad_norm = point.fbe_grad_norm
            gaps.append(grad_norm - (1.0 + gamma * L) / gamma * point.residual)
            gaps.append(point.residual - gamma / (1.0 - gamma * L) * grad_norm)
            worst = max(worst, max(gaps) - slack)
            checked += 1
    return SuiteResult('sandwich', worst <= 0.0, checked, worst, 0.0)


def check_prox_grad_lipschitz(generator, quick=False, instances=5, pairs=1000):
    """||P_gamma(x) - P_gamma(y)|| <= 2 ||x - y||."""
    if quick:
        pairs = 50
    worst = 0.0
    checked = 0
    for problem in random_problems(generator, instances, quick):
        gamma = 0.95 / problem.curvature_bound
        for _ in range(pairs):
            x = torch.randn(problem.n, generator=generator, dtype=DTYPE)
            y = x + torch.randn(problem.n, generator=generator, dtype=DTYPE) * float(
                torch.rand(1, generator=generator, dtype=DTYPE))
            px = FbePoint(problem, x, gamma).backward
            py = FbePoint(problem, y, gamma).backward
            distance = float(torch.linalg.vector_norm(x - y))
            if distance > 0:
                worst = max(worst, float(torch.linalg.vector_norm(px - py)) / distance)
            checked += 1
    return SuiteResult('prox_grad_lipschitz', worst <= 2.0 + 1e-12, checked, worst, 2.0)


def check_curvature(generator, quick=False, instances=10, samples=200, tol=1e-10):
    """Rayleigh quotients of the lifted Hessian never exceed L."""
    if quick:
        samples = 50
    worst = -float('inf')
    for _ in range(instances):
        m = int(torch.randint(2, 12, (1,), generator=generator))
        n = int(torch.randint(2, 16, (1,), generator=generator))
        A = torch.randn(m, n, generator=generator, dtype=DTYPE)
        mu2 = float(10 ** (-2 + 3 * torch.rand(1, generator=generator, dtype=DTYPE)))
        lambda_max = float(scipy.linalg.eigvalsh((A.t() @ A).numpy())[-1])
        L = curvature_bound(lambda_max, mu2)
        problem = lift(_dc_from_matrix(A, mu2), lambda_max)
        x = torch.zeros(2 * n, dtype=DTYPE)
        for _ in range(samples):
            v = torch.randn(2 * n, generator=generator, dtype=DTYPE)
            quotient = float(torch.dot(v, problem.f.hess_vec(x, v))) / float(torch.dot(v, v))
            worst = max(worst, abs(quotient) - L)
    return SuiteResult('curvature', worst <= tol, instances * samples, worst, tol)


def _dc_from_matrix(A, mu2):
    b = torch.ones(A.shape[0], dtype=DTYPE)
    return DcLeastSquares(A, b, mu2, mu2)


SUITES = collections.OrderedDict([
    ('gradient', check_gradient),
    ('prox', check_prox),
    ('sandwich', check_sandwich),
    ('prox_grad_lipschitz', check_prox_grad_lipschitz),
    ('curvature', check_curvature),
])


def run_suites(names=None, quick=False, seed=1):
    """Run the named suites (all by default) from one seeded generator."""
    if names is None or len(names) == 0:
        names = list(SUITES)
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise ValueError('unknown suites {}, choose from {}'.format(unknown, list(SUITES)))
    results = []
    for name in names:
        generator = torch.Generator().manual_seed(seed)
        result = SUITES[name](generator, quick=quick)
        logger.info('%s: passed=%s worst=%.3e over %d checks', result.name, result.passed, result.worst,
                    result.checked)
        results.append(result)
    return results


def summarize(results):
    return {result.name: {'passed': bool(result.passed), 'checked': int(result.checked),
                          'worst': float(result.worst), 'limit': float(result.limit)} for result in results}


def all_passed(results):
    return bool(np.all([result.passed for result in results]))
