# coding=utf-8
"""Forward-backward envelope F_gamma of a composite problem.

F_gamma(x) = f(x) - gamma/2 ||grad f(x)||^2 + P(p) + ||p - u||^2 / (2 gamma)
with u = x - gamma grad f(x) and p = prox_{gamma P}(u). Its gradient is
gamma^{-1} (I - gamma Hess f(x)) (x - p), obtained from one Hessian-vector
product.
"""

import torch

from .errors import InvalidInputError
from .numerics import check_input_finite, ensure_finite, relative_to_value

# Step sizes at or beyond this fraction of 1/L are rejected.
MAX_GAMMA_FRACTION = 0.999


def check_gamma(problem, gamma):
    gamma = float(gamma)
    limit = MAX_GAMMA_FRACTION / problem.curvature_bound
    if not 0.0 < gamma < limit:
        raise InvalidInputError('gamma must lie in (0, {:.6g}) for curvature bound L={:.6g}, got {:.6g}'.format(
            limit, problem.curvature_bound, gamma))
    return gamma


class FbePoint:
    """All envelope quantities at one point, sharing one gradient and one prox.

    The envelope gradient is computed on first access.
    """

    def __init__(self, problem, x, gamma):
        self.problem = problem
        self.gamma = check_gamma(problem, gamma)
        self.x = check_input_finite(problem.check_point(x), 'x')

        f_value, grad_f = problem.f.value_and_gradient(self.x)
        self.f_value = ensure_finite(f_value, 'f(x)')
        self.grad_f = ensure_finite(grad_f, 'grad f(x)')
        self.forward = self.x - self.gamma * self.grad_f
        self.backward = ensure_finite(problem.P.prox(self.gamma, self.forward), 'prox_{gamma P}(u)')
        self.p_value = ensure_finite(problem.P.value(self.backward), 'P(p)')

        step = self.backward - self.forward
        self.fbe = ensure_finite(
            self.f_value - 0.5 * self.gamma * float(torch.dot(self.grad_f, self.grad_f))
            + self.p_value + float(torch.dot(step, step)) / (2.0 * self.gamma),
            'F_gamma(x)')
        self.displacement = self.x - self.backward
        self.residual = float(torch.linalg.vector_norm(self.displacement))
        self._fbe_grad = None

    @property
    def fbe_grad(self):
        if self._fbe_grad is None:
            r = self.displacement
            hr = self.problem.f.hess_vec(self.x, r)
            self._fbe_grad = ensure_finite(r / self.gamma - hr, 'grad F_gamma(x)')
        return self._fbe_grad

    @property
    def fbe_grad_norm(self):
        return float(torch.linalg.vector_norm(self.fbe_grad))

    def relative_gradient_norm(self):
        """||grad F_gamma(x)|| / max(1, F_gamma(x))."""
        return relative_to_value(self.fbe_grad_norm, self.fbe)


def prox_grad_map(problem, x, gamma):
    """P_gamma(x) = prox_{gamma P}(x - gamma grad f(x)).

    A non-finite x or grad f(x) is an input error here; inside the solvers
    the same condition is a NumericError at a trial point.
    """
    gamma = check_gamma(problem, gamma)
    x = check_input_finite(problem.check_point(x), 'x')
    grad_f = check_input_finite(problem.f.gradient(x), 'grad f(x)')
    return ensure_finite(problem.P.prox(gamma, x - gamma * grad_f), 'prox_{gamma P}(u)')


def fbe_value(problem, x, gamma):
    return FbePoint(problem, x, gamma).fbe


def fbe_gradient(problem, x, gamma):
    return FbePoint(problem, x, gamma).fbe_grad


def residual(problem, x, gamma):
    """||x - P_gamma(x)||; zero exactly at stationary points."""
    return FbePoint(problem, x, gamma).residual


def bregman_distance(problem, y, x, gamma):
    """D_phi(y, x) for phi = ||.||^2 / (2 gamma) - f.

    Satisfies D_phi(y, x) >= (1/gamma - L) ||y - x||^2 / 2 and
    F_gamma(x) = inf_y f(y) + P(y) + D_phi(y, x).
    """
    gamma = check_gamma(problem, gamma)
    x = problem.check_point(x, 'x')
    y = problem.check_point(y, 'y')
    f = problem.f
    f_x, grad_x = f.value_and_gradient(x)
    phi_x = float(torch.dot(x, x)) / (2.0 * gamma) - f_x
    phi_y = float(torch.dot(y, y)) / (2.0 * gamma) - f.value(y)
    grad_phi_x = x / gamma - grad_x
    return phi_y - phi_x - float(torch.dot(grad_phi_x, y - x))


def is_stationary(point, tol):
    """Stopping rule of the envelope solvers: relative gradient norm below tol."""
    return point.relative_gradient_norm() < tol
