"""Sub/supersolution (sandwich) iteration for radial Schrodinger-Poisson problems.

    -Lap u + V u + lambda phi u = Q u^p,   -Lap phi = u^2   in R^3
"""
from .config import load_problem, parse_config
from .elliptic import apply_laplacian, helmholtz_solve, pde_residual
from .envelopes import (HypothesisReport, check_hypotheses, lambda_max, subsolution_params,
                        supersolution, verify_ordered_pair)
from .errors import (ConfigError, ConvergenceError, DomainError, GridMismatchError,
                     HypothesisFailure, LambdaOutOfRangeError, SandwichError, SweepError)
from .experiments import SweepResult, geometric_ladder, h1_distance, lambda_sweep, uniform_bound_table
from .export import export_solution
from .grid import (RadialField, RadialGrid, integrate_volume, make_grid, norm_sobolev,
                   radial_derivative)
from .poisson import newtonian_potential, poisson_residual, potential_bound
from .problem import ProblemSpec, auto_b, custom, example_1_1, example_1_2, finite_well
from .solver import SolveResult, choose_k, rhs_f, sandwich_check, sandwich_iterate
from .spectrum import decay_check, ground_state
from .svg import EmptySeriesError, emit_svg

__version__ = "0.1.0"
