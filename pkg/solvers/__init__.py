# coding=utf-8
"""Envelope line-search solvers and nonmonotone proximal gradient baselines."""

from .fbe_lbfgs import DIRECTIONS
from .fbe_lbfgs import fbe_lbfgs_minimize

from .lbfgs import LbfgsMemory
from .lbfgs import lbfgs_direction

from .line_search import LineSearchConfig
from .line_search import armijo_search
from .line_search import gate_direction
from .line_search import is_gradient_related

from .npg import NpgConfig
from .npg import npg_major_minimize
from .npg import npg_minimize

from .report import CONVERGED
from .report import MAX_ITER
from .report import NUMERIC_ERROR
from .report import RunReport

from .step_sizes import BarzilaiBorweinCurvature
