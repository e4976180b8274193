# coding=utf-8

import math
import os
import sys
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import torch

from composite.errors import InvalidInputError
from composite.numerics import DTYPE
from composite.prox import (BlockSeparableTerm, L1L2Term, L1Norm, UnitBallIndicator, ZeroTerm, l1l2_prox,
                            moreau_value, project_unit_ball, soft_threshold, sphere_linear_min)
from property_checks import check_prox, l1l2_objective_batch
from test.commons import print_separator, random_unit_nonnegative, vector


def test_soft_threshold():
    print('> testing soft thresholding ...')
    assert torch.equal(soft_threshold(vector(0.0), 2.0), vector(0.0))
    out = soft_threshold(vector(3.0, -0.5), 1.0)
    assert torch.allclose(out, vector(2.0, 0.0), atol=0, rtol=0), out
    try:
        soft_threshold(vector(1.0), -1.0)
        raise AssertionError('negative threshold accepted')
    except InvalidInputError:
        pass

    generator = torch.Generator().manual_seed(11)
    for _ in range(20):
        y = 2.0 * torch.randn(3, generator=generator, dtype=DTYPE)
        tau = float(torch.rand(1, generator=generator, dtype=DTYPE))
        z = soft_threshold(y, tau)
        best = tau * float(z.abs().sum()) + 0.5 * float(((z - y) ** 2).sum())
        candidates = 4.0 * torch.rand(10000, 3, generator=generator, dtype=DTYPE) - 2.0
        values = tau * candidates.abs().sum(dim=1) + 0.5 * ((candidates - y) ** 2).sum(dim=1)
        error = best - float(values.min())
        assert error <= 1e-12, 'error: {}'.format(error)
    print('>> passed the test :-)')


def test_project_unit_ball():
    print('> testing projection onto the unit ball ...')
    assert torch.equal(project_unit_ball(vector(0.3, 0.4)), vector(0.3, 0.4))
    out = project_unit_ball(vector(3.0, 4.0))
    assert torch.allclose(out, vector(0.6, 0.8), atol=1e-15), out

    generator = torch.Generator().manual_seed(12)
    for _ in range(20):
        y = 3.0 * torch.randn(2, generator=generator, dtype=DTYPE)
        if float(torch.linalg.vector_norm(y)) <= 1.0:
            continue
        p = project_unit_ball(y)
        assert abs(float(torch.linalg.vector_norm(p)) - 1.0) < 1e-14
        samples = 2.0 * torch.rand(20000, 2, generator=generator, dtype=DTYPE) - 1.0
        samples = samples[torch.linalg.vector_norm(samples, dim=1) <= 1.0]
        distances = torch.linalg.vector_norm(samples - y, dim=1)
        assert float(torch.linalg.vector_norm(p - y)) <= float(distances.min()) + 1e-12
    print('>> passed the test :-)')


def test_moreau_value():
    print('> testing Moreau envelope values ...')
    u = vector(1.0, -2.0, 0.5)
    assert moreau_value(ZeroTerm(3), 0.7, u) == 0.0

    u = vector(2.0, 0.0)
    value = moreau_value(UnitBallIndicator(2), 0.5, u)
    print('   ball envelope: {}'.format(value))
    assert abs(value - 1.0) < 1e-14
    # grid over the ball points (r, 0) on the segment towards u
    r = torch.linspace(0.0, 1.0, 100001, dtype=DTYPE)
    grid = (2.0 - r) ** 2 / (2.0 * 0.5)
    assert abs(float(grid.min()) - value) < 1e-12

    value = moreau_value(L1Norm(1), 1.0, vector(3.0))
    assert abs(value - 2.5) < 1e-14
    try:
        moreau_value(L1Norm(1), 0.0, vector(3.0))
        raise AssertionError('zero gamma accepted')
    except InvalidInputError:
        pass
    print('>> passed the test :-)')


def test_sphere_linear_min():
    print('> testing linear minimization over the nonnegative unit sphere ...')
    out = sphere_linear_min(vector(-3.0, -4.0, 1.0))
    assert torch.allclose(out, vector(0.6, 0.8, 0.0), atol=1e-15), out
    out = sphere_linear_min(vector(2.0, 1.0, 5.0))
    assert torch.equal(out, vector(0.0, 1.0, 0.0)), out
    # ties go to the lowest index
    out = sphere_linear_min(vector(3.0, 1.0, 1.0))
    assert torch.equal(out, vector(0.0, 1.0, 0.0)), out

    generator = torch.Generator().manual_seed(13)
    samples = random_unit_nonnegative(100000, 4, generator)
    for _ in range(10):
        v = torch.randn(4, generator=generator, dtype=DTYPE)
        x = sphere_linear_min(v)
        assert abs(float(torch.linalg.vector_norm(x)) - 1.0) < 1e-14
        assert bool((x >= 0).all())
        best = float(torch.dot(v, x))
        assert best <= float(torch.mv(samples, v).min()) + 1e-12
    print('>> passed the test :-)')


def test_l1l2_prox():
    print('> testing l1-l2 proximal operator ...')
    assert torch.equal(l1l2_prox(vector(0.0, 0.0), 1.0, 1.0), vector(0.0, 0.0))

    out = l1l2_prox(vector(3.0), 1.0, 0.5)
    assert abs(float(out[0]) - 2.5) < 1e-14, out
    axis = torch.linspace(-5.0, 5.0, 100001, dtype=DTYPE).unsqueeze(1)
    values = l1l2_objective_batch(axis, vector(3.0), 1.0, 0.5)
    assert abs(float(axis[int(torch.argmin(values))]) - 2.5) < 1e-3

    out = l1l2_prox(vector(2.0, -3.0), 1.0, 1.0)
    root5 = math.sqrt(5.0)
    expected = vector((1.0 + root5) / root5, -2.0 * (1.0 + root5) / root5)
    error = float(torch.linalg.vector_norm(out - expected))
    print('   error in two-dimensional example: {}'.format(error))
    assert error < 1e-12, 'error: {}'.format(error)

    out = l1l2_prox(vector(0.5, 0.2), 1.0, 1.0)
    assert torch.allclose(out, vector(0.5, 0.0), atol=1e-15), out

    for mu1, mu2 in [(0.5, 1.0), (1.0, 0.0), (1.0, -1.0)]:
        try:
            l1l2_prox(vector(1.0), mu1, mu2)
            raise AssertionError('accepted mu1={}, mu2={}'.format(mu1, mu2))
        except InvalidInputError:
            pass

    generator = torch.Generator().manual_seed(14)
    for _ in range(50):
        y = 3.0 * torch.randn(5, generator=generator, dtype=DTYPE)
        mu1 = float(torch.rand(1, generator=generator, dtype=DTYPE)) + 0.1
        error = float(torch.linalg.vector_norm(l1l2_prox(y, mu1, 1e-12) - soft_threshold(y, mu1)))
        assert error < 1e-8, 'error: {}'.format(error)
    print('>> passed the test :-)')


def test_l1l2_prox_oracle():
    print('> testing l1-l2 proximal operator against sampled candidates ...')
    result = check_prox(torch.Generator().manual_seed(15), quick=True)
    print('   worst improvement found: {}'.format(result.worst))
    assert result.passed, result
    print('>> passed the test :-)')


def test_block_separable_prox():
    print('> testing block separable prox ...')
    P = BlockSeparableTerm([UnitBallIndicator(2), L1Norm(2, 1.0)])
    out = P.prox(1.0, vector(3.0, 4.0, 2.0, -0.5))
    assert torch.allclose(out, vector(0.6, 0.8, 1.0, 0.0), atol=1e-15), out
    assert P.value(out) == 1.0
    assert P.value(vector(3.0, 4.0, 0.0, 0.0)) == float('inf')

    term = L1L2Term(3, 0.4, 0.2)
    u = vector(1.0, -0.3, 0.05)
    assert torch.allclose(term.prox(0.5, u), l1l2_prox(u, 0.2, 0.1), atol=0, rtol=0)
    print('>> passed the test :-)')


def main():
    print_separator('test prox toolbox')
    test_soft_threshold()
    test_project_unit_ball()
    test_moreau_value()
    test_sphere_linear_min()
    test_l1l2_prox()
    test_l1l2_prox_oracle()
    test_block_separable_prox()


if __name__ == '__main__':
    main()
