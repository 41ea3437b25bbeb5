"""Rational approximation of branch-point singularities with preassigned poles.

Clustered poles on the negative real axis plus a polynomial term,
fitted by truncated-SVD least squares on exponentially graded grids,
with the trapezoidal reference approximant, pole-density asymptotics,
and contour-integral error verification alongside.
"""

from .version import __version__
from .errors import (LightningError, InputError, EvaluationError, NumericError)
from .problems import (Target, TargetKind, Domain, ApproxProblem, SampleGrid,
                       eval_target, build_fit_grid, build_validation_grid)
from .poles import PoleSet, uniform_poles, tapered_poles, big_poles
from .fitting import (BasisSpec, DesignMatrix, Approximant, FitReport,
                      build_design_matrix, tsvd_solve, fit, evaluate,
                      max_error, DEFAULT_TSVD_EPS)
from .trapezoid import (TrapApproximant, PartialFractionForm, trap_eval,
                        trap_partial_fractions, trap_error_bound,
                        truncated_sqrt_integral, large_pole_tail,
                        naive_partial_fraction_eval,
                        stable_partial_fraction_eval, default_step,
                        t_parameter)
from .density import (density_leading, density_correction, stahl_density,
                      invert_stahl_density, large_pole_estimate,
                      pole_from_density, count_large_poles)
from .contour import (ContourSetup, ContourTerms, PoleResidue, BoundCheck,
                      IdentityReport, quadrature_error_kernel,
                      error_integrand, node_sum, pole_residue_pairs,
                      residue_term, contour_terms, error_identity_report,
                      check_conjecture_bound, residue_rate_check)
from .tables import ResultTable, render_table, write_table, parse_csv_table
from .quadrature import doubling_simpson, line_integral
