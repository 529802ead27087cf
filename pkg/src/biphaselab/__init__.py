"""biphaselab: numerical laboratory for the weakly coupled biphase pressure problem.

Solves the radially symmetric two-phase Darcy pressure system on the unit
sphere three ways -- exact closed forms, second-order finite differences,
and boundary-layer asymptotic approximants of arbitrary order -- and
measures convergence rates and decay constants against each other.
"""

from ._kernels import backend as kernel_backend
from .analysis import (AprioriReport, ConvergenceReport, DecayReport,
                       ErrorNorms, apriori_check, convergence_study,
                       decay_study, error_norms)
from .exact import (exact_p, exact_p_derivative, exact_q, exact_q_derivative,
                    monophase_value)
from .grid import Grid, GridMismatchError, RadialField, make_grid
from .model import (DerivedConstants, Parameters, derive_constants,
                    from_phases, make_parameters, to_phases)
from .profiles import (ExpansionSet, GammaValue, PolyExp, approximant,
                       approximant_derivative, apply_profile_operator,
                       build_expansion, polyexp_derivative, polyexp_eval,
                       smoothstep_cutoff, solve_profile_ode, transport_rhs)
from .solver import (LayerResolutionError, LayerResolutionWarning,
                     SolverError, TridiagonalSystem, assemble_p_system,
                     assemble_q_system, layer_resolved, min_intervals,
                     solve_coupled_fd, solve_p_fd, solve_q_fd,
                     solve_tridiagonal)

__version__ = "0.1.0"

__all__ = [
    "AprioriReport", "ConvergenceReport", "DecayReport", "DerivedConstants",
    "ErrorNorms", "ExpansionSet", "GammaValue", "Grid", "GridMismatchError",
    "LayerResolutionError", "LayerResolutionWarning", "Parameters", "PolyExp",
    "RadialField", "SolverError", "TridiagonalSystem", "apriori_check",
    "approximant", "approximant_derivative", "apply_profile_operator",
    "assemble_p_system", "assemble_q_system", "build_expansion",
    "convergence_study", "decay_study", "derive_constants", "error_norms",
    "exact_p", "exact_p_derivative", "exact_q", "exact_q_derivative",
    "from_phases", "kernel_backend", "layer_resolved", "make_grid",
    "make_parameters", "min_intervals", "monophase_value",
    "polyexp_derivative", "polyexp_eval", "smoothstep_cutoff",
    "solve_coupled_fd", "solve_p_fd", "solve_profile_ode", "solve_q_fd",
    "solve_tridiagonal", "to_phases", "transport_rhs",
]
