# coding=utf-8
"""Curvature estimates L_k for the nonmonotone proximal gradient methods."""

import torch

from composite.errors import InvalidInputError, StepSizeError


class BarzilaiBorweinCurvature:
    """Per-iteration curvature estimate with Barzilai-Borwein initialization.

    Iteration 0 starts at `initial`; later iterations start at the clipped
    Barzilai-Borwein value ||A s||^2 / ||s||^2 with s = z^k - z^{k-1}. Each
    rejected candidate multiplies the estimate by `increase_factor`.
    """

    def __init__(self, A, initial=1.0, increase_factor=2.0, lower=1e-8, upper=1e8):
        if not increase_factor > 1:
            raise InvalidInputError('increase factor must exceed 1, got {}'.format(increase_factor))
        if not 0 < lower <= upper:
            raise InvalidInputError('need 0 < lower <= upper, got [{}, {}]'.format(lower, upper))
        self.A = A
        self.initial = float(initial)
        self.increase_factor = float(increase_factor)
        self.lower = float(lower)
        self.upper = float(upper)
        self.backtracks = 0
        self.curvature = self.clip(self.initial)

    def clip(self, value):
        return min(max(value, self.lower), self.upper)

    def barzilai_borwein(self, s):
        s_norm_sq = float(torch.dot(s, s))
        if s_norm_sq == 0.0:
            return self.initial
        As = torch.mv(self.A, s)
        return float(torch.dot(As, As)) / s_norm_sq

    def step(self, s=None):
        """Start the next iteration from the displacement s of the last one."""
        self.backtracks = 0
        if s is None:
            self.curvature = self.clip(self.initial)
        else:
            self.curvature = self.clip(self.barzilai_borwein(s))
        return self.curvature

    def increase(self):
        """Reject the current candidate; raises StepSizeError beyond the ceiling."""
        self.curvature *= self.increase_factor
        self.backtracks += 1
        if self.curvature > self.upper:
            raise StepSizeError('curvature estimate {:.3e} exceeds ceiling {:.3e} after {} backtracks'.format(
                self.curvature, self.upper, self.backtracks))
        return self.curvature

    def state_dict(self):
        return {
            'curvature': self.curvature,
            'backtracks': self.backtracks
        }
