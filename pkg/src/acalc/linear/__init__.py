"""Linear constant-coefficient and Cauchy-Euler ODEs over an algebra."""

from .cauchy_euler import (CauchyEulerProblem, CauchyEulerSolution, cauchy_euler_transform,
                           characteristic_equation, solve_cauchy_euler)
from .degenerate import DegeneracyReport, WitnessIVP, analyze_degenerate, in_ideal
from .operators import (ConstCoeffOperator, Provenance, SolutionBasis, exponential_evaluator,
                        solve_by_factors, solve_cc, solve_via_product)
from .wronskian import (AbelReport, abel_check, block_system, determinant, fit_ivp,
                        solution_matrix, wronskian)

__all__ = [
    "CauchyEulerProblem", "CauchyEulerSolution", "cauchy_euler_transform",
    "characteristic_equation", "solve_cauchy_euler",
    "DegeneracyReport", "WitnessIVP", "analyze_degenerate", "in_ideal",
    "ConstCoeffOperator", "Provenance", "SolutionBasis", "exponential_evaluator",
    "solve_by_factors", "solve_cc", "solve_via_product",
    "AbelReport", "abel_check", "block_system", "determinant", "fit_ivp",
    "solution_matrix", "wronskian",
]
