# coding=utf-8
"""Composite problems, proximal operators and the forward-backward envelope."""

from .errors import ConvergenceError
from .errors import FbeError
from .errors import InvalidInputError
from .errors import LineSearchError
from .errors import NumericError
from .errors import StepSizeError
from .errors import UnsupportedFeatureError

from .problem import CompositeProblem
from .problem import LeastSquaresTerm
from .problem import ProxableTerm
from .problem import QuadraticTerm
from .problem import SmoothTerm

from .prox import BlockSeparableTerm
from .prox import L1L2ProxParams
from .prox import L1L2Term
from .prox import L1Norm
from .prox import UnitBallIndicator
from .prox import ZeroTerm
from .prox import l1l2_prox
from .prox import moreau_value
from .prox import project_unit_ball
from .prox import soft_threshold
from .prox import sphere_linear_min

from .envelope import FbePoint
from .envelope import bregman_distance
from .envelope import fbe_gradient
from .envelope import fbe_value
from .envelope import prox_grad_map
from .envelope import residual

from .lifting import CoercivityCheck
from .lifting import DcLeastSquares
from .lifting import L1_MINUS_L2
from .lifting import LiftedProblem
from .lifting import ProductVar
from .lifting import coercivity_precheck
from .lifting import curvature_bound
from .lifting import j_value
from .lifting import lift
from .lifting import lifted_objective
from .lifting import recover_dual

from .spectral import spectral_norm
