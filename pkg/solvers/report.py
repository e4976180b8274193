# coding=utf-8
"""Per-run solver report."""

CONVERGED = 'converged'
MAX_ITER = 'max_iter'
NUMERIC_ERROR = 'numeric_error'
TERMINATIONS = (CONVERGED, MAX_ITER, NUMERIC_ERROR)


class RunReport:
    """Outcome of one solve.

    Arguments:
        solver: solver name, e.g. 'fbe_lbfgs'.
        iterations: number of accepted iterations.
        wall_time_s: monotonic wall time of the iteration loop.
        final_objective: F_gamma at the last iterate for envelope solvers,
            the original objective for the proximal gradient baselines.
        original_objective: objective of the original problem at the last
            iterate (for lifted problems, J of the z-block).
        final_residual: ||x - P_gamma(x)|| for envelope solvers and
            ||z^k - z^{k-1}|| for the baselines.
        value_history: final_objective at every iterate, length iterations + 1.
        termination: one of TERMINATIONS.
        solution: last iterate.
        step_sizes: accepted line-search steps (envelope solvers) or
            accepted curvature estimates L_k (baselines).
        steepest_fallbacks: iterations where the quasi-Newton candidate was
            replaced by the negative gradient.
        debug_violations: per-step decrease bounds found violated in debug mode.
        message: error text when termination is numeric_error.
    """

    def __init__(self, solver, iterations, wall_time_s, final_objective, original_objective,
                 final_residual, value_history, termination, solution=None, step_sizes=None,
                 steepest_fallbacks=0, debug_violations=0, message=None):
        assert termination in TERMINATIONS, 'unknown termination {}'.format(termination)
        assert len(value_history) == iterations + 1, 'value history must have iterations + 1 entries'
        self.solver = solver
        self.iterations = int(iterations)
        self.wall_time_s = float(wall_time_s)
        self.final_objective = float(final_objective)
        self.original_objective = float(original_objective)
        self.final_residual = float(final_residual)
        self.value_history = tuple(float(v) for v in value_history)
        self.termination = termination
        self.solution = solution
        self.step_sizes = tuple(step_sizes or ())
        self.steepest_fallbacks = int(steepest_fallbacks)
        self.debug_violations = int(debug_violations)
        self.message = message

    @property
    def converged(self):
        return self.termination == CONVERGED

    def min_step_size(self):
        if not self.step_sizes:
            return None
        return min(self.step_sizes)

    def to_dict(self, with_history=False):
        sd = {
            'solver': self.solver,
            'iter': self.iterations,
            'time_s': self.wall_time_s,
            'final_objective': self.final_objective,
            'fval': self.original_objective,
            'residual': self.final_residual,
            'termination': self.termination,
            'steepest_fallbacks': self.steepest_fallbacks,
            'debug_violations': self.debug_violations,
        }
        if self.message is not None:
            sd['message'] = self.message
        if with_history:
            sd['value_history'] = list(self.value_history)
            sd['step_sizes'] = list(self.step_sizes)
        return sd

    def __repr__(self):
        return 'RunReport(solver={}, iter={}, fval={:.6e}, residual={:.3e}, termination={})'.format(
            self.solver, self.iterations, self.original_objective, self.final_residual, self.termination)
