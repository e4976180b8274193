# coding=utf-8
"""Typed errors raised by the composite optimization toolkit."""


class FbeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(FbeError, ValueError):
    """A parameter or vector violates an operation's precondition."""


class NumericError(FbeError, ArithmeticError):
    """A non-finite value (inf or nan) appeared in an intermediate quantity."""


class LineSearchError(NumericError):
    """Armijo backtracking hit the backtracking cap without accepting a step."""


class StepSizeError(NumericError):
    """Nonmonotone backtracking pushed the curvature estimate above its ceiling."""


class ConvergenceError(FbeError, RuntimeError):
    """An inner iterative routine stopped at its iteration cap.

    Arguments:
        estimate: best value computed before giving up.
    """

    def __init__(self, message, estimate=None):
        super(ConvergenceError, self).__init__(message)
        self.estimate = estimate


class UnsupportedFeatureError(FbeError, NotImplementedError):
    """The requested regularizer or solver variant is not implemented."""
