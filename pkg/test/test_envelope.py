# coding=utf-8

import os
import sys
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import torch

from composite.envelope import (FbePoint, bregman_distance, fbe_gradient, fbe_value, is_stationary,
                                prox_grad_map, residual)
from composite.errors import InvalidInputError, NumericError
from composite.lifting import lift
from composite.numerics import DTYPE, ensure_finite, has_inf_or_nan
from composite.problem import CompositeProblem, QuadraticTerm
from composite.prox import L1Norm, ZeroTerm, soft_threshold
from property_checks import check_gradient, check_prox_grad_lipschitz, check_sandwich, gradient_relative_error
from test.commons import (gaussian_lifted, half_squared_norm_problem, print_separator, random_dc,
                          random_quadratic_l1, shifted_problem, vector)


def test_prox_grad_map():
    print('> testing prox-gradient map ...')
    problem = half_squared_norm_problem()
    p = prox_grad_map(problem, vector(2.0), 0.5)
    assert torch.equal(p, vector(1.0)), p

    problem = shifted_problem(vector(3.0), L1Norm(1))
    point = FbePoint(problem, vector(0.0), 0.5)
    assert torch.allclose(point.forward, vector(1.5), atol=0, rtol=0), point.forward
    assert torch.allclose(point.backward, vector(1.0), atol=0, rtol=0), point.backward

    # x = 2 is the minimizer of 1/2 (x - 3)^2 + |x|
    assert torch.allclose(prox_grad_map(problem, vector(2.0), 0.5), vector(2.0), atol=0, rtol=0)
    print('>> passed the test :-)')


def test_fbe_value():
    print('> testing envelope values ...')
    problem = half_squared_norm_problem(3)
    x = vector(1.0, 2.0, -1.0)
    for gamma in (0.1, 0.3, 0.5, 0.9):
        expected = 0.5 * (1.0 - gamma) * float(torch.dot(x, x))
        error = abs(fbe_value(problem, x, gamma) - expected)
        assert error < 1e-14, 'error: {}'.format(error)

    problem = shifted_problem(vector(3.0), L1Norm(1))
    assert abs(fbe_value(problem, vector(2.0), 0.5) - problem.objective(vector(2.0))) < 1e-14

    generator = torch.Generator().manual_seed(21)
    problem = random_quadratic_l1(5, weight=0.7, generator=generator)
    gamma = 0.9 / problem.curvature_bound
    for _ in range(10):
        x = torch.randn(5, generator=generator, dtype=DTYPE)
        grad = problem.f.gradient(x)
        p = soft_threshold(x - gamma * grad, gamma * 0.7)
        inner = (problem.f.value(x) + float(torch.dot(grad, p - x)) + float(torch.dot(p - x, p - x)) / (2 * gamma)
                 + 0.7 * float(p.abs().sum()))
        error = abs(fbe_value(problem, x, gamma) - inner)
        assert error < 1e-12 * max(1.0, abs(inner)), 'error: {}'.format(error)
    print('>> passed the test :-)')


def test_fbe_gradient():
    print('> testing envelope gradient ...')
    problem = half_squared_norm_problem()
    assert torch.allclose(fbe_gradient(problem, vector(2.0), 0.5), vector(1.0), atol=1e-15)

    problem = shifted_problem(vector(3.0), L1Norm(1))
    assert torch.equal(fbe_gradient(problem, vector(2.0), 0.5), vector(0.0))

    generator = torch.Generator().manual_seed(22)
    dc = random_dc(4, 3, 0.05, 0.05, generator)
    problem = lift(dc)
    assert problem.n == 6
    gamma = 0.95 / problem.curvature_bound
    worst = 0.0
    for _ in range(20):
        x = torch.randn(6, generator=generator, dtype=DTYPE)
        worst = max(worst, gradient_relative_error(problem, x, gamma))
    print('   worst finite-difference error: {}'.format(worst))
    assert worst <= 1e-5, 'error: {}'.format(worst)

    result = check_gradient(torch.Generator().manual_seed(23), quick=True)
    assert result.passed, result
    print('>> passed the test :-)')


def test_residual():
    print('> testing residual ...')
    assert abs(residual(half_squared_norm_problem(), vector(2.0), 0.5) - 1.0) < 1e-15
    problem = shifted_problem(vector(3.0), L1Norm(1))
    point = FbePoint(problem, vector(2.0), 0.5)
    assert point.residual == 0.0
    assert is_stationary(point, 1e-12)
    assert not is_stationary(FbePoint(problem, vector(0.0), 0.5), 1e-6)
    print('>> passed the test :-)')


def test_bregman_distance():
    print('> testing Bregman distance ...')
    generator = torch.Generator().manual_seed(24)
    problem = random_quadratic_l1(4, generator=generator)
    gamma = 0.9 / problem.curvature_bound
    x = torch.randn(4, generator=generator, dtype=DTYPE)
    assert abs(bregman_distance(problem, x, x, gamma)) < 1e-12

    zero = CompositeProblem(QuadraticTerm(torch.zeros(3, 3, dtype=DTYPE), curvature_bound=1.0), ZeroTerm(3))
    y, x0 = vector(1.0, -1.0, 2.0), vector(0.5, 0.0, 0.0)
    assert abs(bregman_distance(zero, y, x0, 0.5) - float(torch.dot(y - x0, y - x0))) < 1e-14

    L = problem.curvature_bound
    for _ in range(100):
        x = torch.randn(4, generator=generator, dtype=DTYPE)
        y = 2.0 * torch.randn(4, generator=generator, dtype=DTYPE)
        point = FbePoint(problem, x, gamma)
        distance = bregman_distance(problem, y, x, gamma)
        assert distance >= 0.5 * (1.0 / gamma - L) * float(torch.dot(y - x, y - x)) - 1e-10
        assert point.fbe <= problem.objective(y) + distance + 1e-10
        # the infimum is attained at the prox-gradient point
        at_p = problem.objective(point.backward) + bregman_distance(problem, point.backward, x, gamma)
        assert abs(at_p - point.fbe) < 1e-10 * max(1.0, abs(point.fbe))
    print('>> passed the test :-)')


def test_gamma_and_input_checks():
    print('> testing step size and input validation ...')
    problem = half_squared_norm_problem()
    for gamma in (0.0, -0.1, 0.999, 1.0, 2.0):
        try:
            FbePoint(problem, vector(1.0), gamma)
            raise AssertionError('accepted gamma {}'.format(gamma))
        except InvalidInputError:
            pass
    for x in (vector(float('nan')), vector(float('inf')), vector(1.0, 2.0)):
        try:
            FbePoint(problem, x, 0.5)
            raise AssertionError('accepted x {}'.format(x))
        except InvalidInputError:
            pass
    print('>> passed the test :-)')


def test_envelope_properties():
    print('> testing sandwich and prox-gradient Lipschitz properties ...')
    sandwich = check_sandwich(torch.Generator().manual_seed(25), quick=True)
    print('   sandwich worst gap: {}'.format(sandwich.worst))
    assert sandwich.passed, sandwich
    lipschitz = check_prox_grad_lipschitz(torch.Generator().manual_seed(26), quick=True)
    print('   prox-gradient Lipschitz ratio: {}'.format(lipschitz.worst))
    assert lipschitz.passed, lipschitz

    _, _, problem = gaussian_lifted(20, 60, 4, 1e-2, seed=3)
    gamma = 0.95 / problem.curvature_bound
    point = FbePoint(problem, problem.zeros(), gamma)
    image = FbePoint(problem, point.backward, gamma)
    assert image.fbe <= point.fbe + 1e-12
    print('>> passed the test :-)')


def test_non_finite_inputs():
    print('> testing non-finite inputs and gradients ...')
    assert not has_inf_or_nan(vector(1e308, 1e308))
    assert has_inf_or_nan(vector(1.0, float('inf'))) and has_inf_or_nan(vector(float('nan')))
    assert has_inf_or_nan(float('-inf')) and not has_inf_or_nan(1e308)
    big = vector(1e308, 1e308)
    assert ensure_finite(big, 'big') is big

    problem = CompositeProblem(QuadraticTerm(2.0 * torch.eye(1, dtype=DTYPE), curvature_bound=2.0), ZeroTerm(1))
    x = vector(1.5e308)
    for bad in (x, vector(float('nan'))):
        try:
            prox_grad_map(problem, bad, 0.25)
            raise AssertionError('accepted {}'.format(bad))
        except InvalidInputError:
            pass
    try:
        fbe_value(problem, x, 0.25)
        raise AssertionError('overflowing envelope accepted')
    except NumericError:
        pass
    assert torch.equal(prox_grad_map(problem, vector(1e300), 0.25), vector(0.5e300))
    print('>> passed the test :-)')


def main():
    print_separator('test forward-backward envelope')
    test_prox_grad_map()
    test_fbe_value()
    test_fbe_gradient()
    test_residual()
    test_bregman_distance()
    test_gamma_and_input_checks()
    test_non_finite_inputs()
    test_envelope_properties()


if __name__ == '__main__':
    main()
