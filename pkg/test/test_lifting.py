# coding=utf-8

import math
import os
import sys
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy
import torch

from composite.errors import ConvergenceError, InvalidInputError, UnsupportedFeatureError
from composite.lifting import (DcLeastSquares, ProductVar, coercivity_precheck, curvature_bound, j_value, lift,
                               lifted_objective, recover_dual)
from composite.numerics import DTYPE
from composite.spectral import spectral_norm
from data_utils.instances import GAUSSIAN, InstanceSpec, gen_gaussian
from property_checks import check_curvature
from test.commons import exact_lambda_max, print_separator, random_dc, vector


def test_spectral_norm():
    print('> testing power iteration ...')
    value = spectral_norm(torch.eye(3, dtype=DTYPE), tol=1e-12)
    assert abs(value - 1.0) < 1e-12, value
    value = spectral_norm(torch.diag(vector(1.0, 2.0, 3.0)), tol=1e-12)
    assert abs(value - 9.0) < 1e-9, value

    generator = torch.Generator().manual_seed(31)
    A = torch.randn(20, 50, generator=generator, dtype=DTYPE)
    value = spectral_norm(A, tol=1e-12)
    expected = exact_lambda_max(A)
    error = abs(value - expected) / expected
    print('   relative error against eigvalsh: {}'.format(error))
    assert error < 1e-8, 'error: {}'.format(error)

    for bad in (torch.zeros(3, 3, dtype=DTYPE), torch.ones(3, dtype=DTYPE)):
        try:
            spectral_norm(bad)
            raise AssertionError('accepted {}'.format(bad))
        except InvalidInputError:
            pass
    try:
        spectral_norm(A, tol=0.0)
        raise AssertionError('accepted tol 0')
    except InvalidInputError:
        pass
    try:
        spectral_norm(A, max_iter=2)
        raise AssertionError('converged in two iterations')
    except ConvergenceError as error:
        assert error.estimate is not None and error.estimate > 0
    print('>> passed the test :-)')


def test_spectral_norm_default_tol():
    print('> testing power iteration accuracy at the default tolerance ...')
    for gap in (0.9, 0.99, 0.995, 0.999):
        A = torch.diag(vector(1.0, math.sqrt(gap), 0.1, 0.1, 0.1))
        value = spectral_norm(A, max_iter=20000)
        error = abs(value - 1.0)
        print('   top eigenvalue ratio {}: relative error {:.3e}'.format(gap, error))
        assert error <= 1e-6, 'error: {}'.format(error)

    instance = gen_gaussian(InstanceSpec(GAUSSIAN, 720, 2560, 160, sigma=1e-2, seed=1))
    A = torch.as_tensor(instance.A, dtype=DTYPE)
    expected = float(torch.linalg.eigvalsh(A @ A.t())[-1])
    value = spectral_norm(A, max_iter=20000)
    error = abs(value - expected) / expected
    print('   720x2560 Gaussian: relative error {:.3e}'.format(error))
    assert error <= 1e-6, 'error: {}'.format(error)
    print('>> passed the test :-)')


def test_curvature_bound():
    print('> testing curvature bound ...')
    assert curvature_bound(0.0, 1.0) == 1.0
    golden = (1.0 + math.sqrt(5.0)) / 2.0
    assert abs(curvature_bound(1.0, 1.0) - golden) < 1e-15
    H = numpy.array([[0.0, -1.0], [-1.0, 1.0]])
    assert abs(numpy.abs(numpy.linalg.eigvalsh(H)).max() - golden) < 1e-14
    for lambda_max, mu2 in [(-1.0, 1.0), (1.0, 0.0)]:
        try:
            curvature_bound(lambda_max, mu2)
            raise AssertionError('accepted lambda_max={}, mu2={}'.format(lambda_max, mu2))
        except InvalidInputError:
            pass

    result = check_curvature(torch.Generator().manual_seed(32), quick=True)
    print('   worst Rayleigh quotient excess: {}'.format(result.worst))
    assert result.passed, result
    print('>> passed the test :-)')


def test_lifted_smooth_term():
    print('> testing lifted smooth part ...')
    generator = torch.Generator().manual_seed(33)
    dc = random_dc(6, 4, 0.3, 0.2, generator)
    problem = lift(dc)
    assert abs(problem.lambda_max - exact_lambda_max(dc.A)) < 1e-3 * problem.lambda_max

    value, grad = problem.f.value_and_gradient(problem.zeros())
    assert abs(value - 0.5 * float(torch.dot(dc.b, dc.b))) < 1e-14
    expected = torch.cat([torch.zeros(4, dtype=DTYPE), -torch.mv(dc.A.t(), dc.b)])
    assert torch.allclose(grad, expected, atol=1e-14)

    x = torch.randn(8, generator=generator, dtype=DTYPE)
    for _ in range(10):
        v = torch.randn(8, generator=generator, dtype=DTYPE)
        w = torch.randn(8, generator=generator, dtype=DTYPE)
        u_block, v_block = v[:4], v[4:]
        expected = torch.cat([-dc.mu2 * v_block, torch.mv(dc.A.t(), torch.mv(dc.A, v_block)) - dc.mu2 * u_block])
        assert torch.allclose(problem.f.hess_vec(x, v), expected, atol=1e-13)
        left = float(torch.dot(problem.f.hess_vec(x, v), w))
        right = float(torch.dot(problem.f.hess_vec(x, w), v))
        assert abs(left - right) < 1e-12 * max(1.0, abs(left))
        # the gradient is affine, so differences are exact up to rounding
        difference = problem.f.gradient(x + v) - problem.f.gradient(x)
        assert torch.allclose(difference, problem.f.hess_vec(x, v), atol=1e-12)
    print('>> passed the test :-)')


def test_lifted_prox_and_objective():
    print('> testing lifted prox and objective recovery ...')
    dc = DcLeastSquares(torch.eye(2, dtype=DTYPE), vector(1.0, 0.0), 1.0, 0.5)
    problem = lift(dc, 1.0)
    out = problem.P.prox(1.0, vector(3.0, 4.0, 2.0, -0.5))
    assert torch.allclose(out, vector(0.6, 0.8, 1.0, 0.0), atol=1e-15), out

    generator = torch.Generator().manual_seed(34)
    dc = random_dc(5, 7, 0.4, 0.4, generator)
    problem = lift(dc)
    for _ in range(20):
        z = torch.randn(7, generator=generator, dtype=DTYPE)
        y = recover_dual(z)
        J = j_value(dc, z)
        assert abs(lifted_objective(dc, y, z) - J) < 1e-12 * max(1.0, abs(J))
        assert abs(problem.original_objective(torch.cat([y, z])) - J) < 1e-12 * max(1.0, abs(J))
        assert torch.equal(problem.recover(torch.cat([torch.zeros(7, dtype=DTYPE), z])).y, y)
        # any other y in the ball can only raise the lifted objective
        other = torch.randn(7, generator=generator, dtype=DTYPE)
        other = other / max(1.0, float(torch.linalg.vector_norm(other)))
        assert lifted_objective(dc, other, z) >= J - 1e-12
    outside = torch.full((7,), 1.0, dtype=DTYPE)
    assert lifted_objective(dc, outside, torch.zeros(7, dtype=DTYPE)) == float('inf')
    assert torch.equal(recover_dual(torch.zeros(3, dtype=DTYPE)), vector(1.0, 0.0, 0.0))

    point = ProductVar.split(torch.arange(6, dtype=DTYPE))
    assert torch.equal(point.y, vector(0.0, 1.0, 2.0)) and torch.equal(point.z, vector(3.0, 4.0, 5.0))
    assert torch.equal(point.join(), torch.arange(6, dtype=DTYPE))
    try:
        ProductVar.split(torch.zeros(5, dtype=DTYPE))
        raise AssertionError('accepted an odd-length lifted vector')
    except InvalidInputError:
        pass
    print('>> passed the test :-)')


def test_j_value():
    print('> testing original objective ...')
    generator = torch.Generator().manual_seed(35)
    dc = random_dc(6, 5, 0.5, 0.5, generator)
    assert abs(j_value(dc, torch.zeros(5, dtype=DTYPE)) - 0.5 * float(torch.dot(dc.b, dc.b))) < 1e-14
    z = torch.zeros(5, dtype=DTYPE)
    z[2] = -1.7
    assert abs(j_value(dc, z) - dc.least_squares(z)) < 1e-14

    dc = random_dc(6, 5, 0.8, 0.5, generator)
    for _ in range(100):
        z = 3.0 * torch.randn(5, generator=generator, dtype=DTYPE)
        assert j_value(dc, z) >= 0.0

    for _ in range(1000):
        z = torch.randn(6, generator=generator, dtype=DTYPE)
        z[int(torch.randint(0, 6, (1,), generator=generator))] = 0.0
        assert float(z.abs().sum()) > float(torch.linalg.vector_norm(z))
    print('>> passed the test :-)')


def test_coercivity_precheck():
    print('> testing coercivity precheck ...')
    generator = torch.Generator().manual_seed(36)
    A = torch.randn(4, 6, generator=generator, dtype=DTYPE)
    b = torch.randn(4, generator=generator, dtype=DTYPE)
    assert coercivity_precheck(DcLeastSquares(A, b, 2e-3, 1e-3)).passed
    assert coercivity_precheck(DcLeastSquares(A, b, 1e-3, 1e-3)).passed
    A[:, 3] = 0.0
    check = coercivity_precheck(DcLeastSquares(A, b, 1e-3, 1e-3))
    print('   {}'.format(check.reason))
    assert not check.passed and '3' in check.reason
    assert coercivity_precheck(DcLeastSquares(A, b, 2e-3, 1e-3)).passed

    try:
        DcLeastSquares(A, b, 1e-3, 1e-3, regularizer='scad')
        raise AssertionError('accepted an unknown regularizer')
    except UnsupportedFeatureError:
        pass
    for mu1, mu2 in [(1e-3, 2e-3), (1e-3, 0.0)]:
        try:
            DcLeastSquares(A, b, mu1, mu2)
            raise AssertionError('accepted mu1={}, mu2={}'.format(mu1, mu2))
        except InvalidInputError:
            pass
    try:
        DcLeastSquares(A, torch.zeros(3, dtype=DTYPE), 1e-3, 1e-3)
        raise AssertionError('accepted mismatched b')
    except InvalidInputError:
        pass
    print('>> passed the test :-)')


def main():
    print_separator('test lifting and spectral norm')
    test_spectral_norm()
    test_spectral_norm_default_tol()
    test_curvature_bound()
    test_lifted_smooth_term()
    test_lifted_prox_and_objective()
    test_j_value()
    test_coercivity_precheck()


if __name__ == '__main__':
    main()
