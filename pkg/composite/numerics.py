# coding=utf-8
"""Small tensor helpers shared by the envelope, prox and solver code."""

import math

import torch

from .errors import InvalidInputError, NumericError

DTYPE = torch.float64


def as_vector(x, name='x'):
    """Return `x` as a 1-D float64 tensor (copying only when needed)."""
    if not isinstance(x, torch.Tensor):
        x = torch.as_tensor(x, dtype=DTYPE)
    elif x.dtype != DTYPE:
        x = x.to(DTYPE)
    if x.dim() != 1:
        raise InvalidInputError('{} must be a vector, got shape {}'.format(name, tuple(x.shape)))
    return x


def has_inf_or_nan(x):
    """True when a tensor or scalar holds inf or nan anywhere."""
    if isinstance(x, torch.Tensor):
        return not bool(torch.isfinite(x).all())
    return not math.isfinite(float(x))


def ensure_finite(x, what):
    """Raise NumericError when `x` is not finite; returns `x` unchanged."""
    if has_inf_or_nan(x):
        raise NumericError('non-finite value in {}'.format(what))
    return x


def check_input_finite(x, what):
    """Like ensure_finite, but for caller-supplied inputs."""
    if has_inf_or_nan(x):
        raise InvalidInputError('{} must be finite'.format(what))
    return x


def norm(x):
    return float(torch.linalg.vector_norm(x))


def dot(x, y):
    return float(torch.dot(x, y))


def relative_to_value(magnitude, value):
    """Absolute-or-relative measure magnitude / max(1, value) used by stopping rules."""
    return magnitude / max(1.0, value)
