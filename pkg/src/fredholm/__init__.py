"""Training-free solvers for Fredholm integral equations of the second
kind, built as layered fixed-point networks with analytically assembled
weights.  Covers linear and nonlinear integral equations, two-point
boundary value problems, and the Laplace equation on the unit disc via a
boundary integral equation, with a priori error budgets, a direct dense
reference solve and a finite-difference comparison solver.
"""

from .errors import (BoundUnavailableError, ConvergenceError, DivergenceError,
                     DomainError, ExprSyntaxError, FredholmError,
                     NumericalError, SingularSystemError,
                     UnboundVariableError, ValidationError)
from .exprlang import compile_fn, evaluate, free_vars, parse, render
from .grid import Grid1D, nearest_index, uniform_grid
from .operator import (DiscreteOperator, FieProblem, KMSchedule,
                       apply_km_step, discretize, estimate_contraction,
                       estimate_derivative_bound, residual_norm)
from .network import (ErrorBudget, FixedPointNet, SolutionField,
                      budget_from_operator, build_network, dense_solve,
                      error_bound, forward, km_error_estimate, layer_sweep,
                      plan_layers, query)
from .nonlinear import (IterationTrace, NonlinearProblem, evaluate_nonlinear,
                        linearized_source, solve_nonlinear)
from .bvp import BvpSpec, bvp_to_fie, ode_residual, recover_solution
from .laplace import (BoundaryDensity, DiscBoundaryProblem, PotentialField,
                      boundary_project, build_bie, evaluate_potential,
                      polar_double_layer_kernel, solve_density)
from .fd import FieldStats, PolarGrid, compare_fields, solve_fd
from .registry import EXAMPLES, ExampleSpec, example_names, get_example
from .report import ReportBundle, render_csv, render_json, write_report
from .cli import main, run_compare_fd, run_config, run_example

__version__ = "0.1.0"

__all__ = [
    "BoundUnavailableError", "ConvergenceError", "DivergenceError",
    "DomainError", "ExprSyntaxError", "FredholmError", "NumericalError",
    "SingularSystemError", "UnboundVariableError", "ValidationError",
    "compile_fn", "evaluate", "free_vars", "parse", "render",
    "Grid1D", "nearest_index", "uniform_grid",
    "DiscreteOperator", "FieProblem", "KMSchedule", "apply_km_step",
    "discretize", "estimate_contraction", "estimate_derivative_bound",
    "residual_norm",
    "ErrorBudget", "FixedPointNet", "SolutionField", "budget_from_operator",
    "build_network", "dense_solve", "error_bound", "forward",
    "km_error_estimate", "layer_sweep", "plan_layers", "query",
    "IterationTrace", "NonlinearProblem", "evaluate_nonlinear",
    "linearized_source", "solve_nonlinear",
    "BvpSpec", "bvp_to_fie", "ode_residual", "recover_solution",
    "BoundaryDensity", "DiscBoundaryProblem", "PotentialField",
    "boundary_project", "build_bie", "evaluate_potential",
    "polar_double_layer_kernel", "solve_density",
    "FieldStats", "PolarGrid", "compare_fields", "solve_fd",
    "EXAMPLES", "ExampleSpec", "example_names", "get_example",
    "ReportBundle", "render_csv", "render_json", "write_report",
    "main", "run_compare_fd", "run_config", "run_example",
    "__version__",
]
