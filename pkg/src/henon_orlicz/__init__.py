"""Variational toolkit for the Henon equation with Orlicz (g-Laplacian) growth.

Modules
-------
nfunction      N-function calculus: catalog, indices, conjugates, comparisons.
luxemburg      Modulars and Luxemburg norms on weighted 1-d measures; the
               radial decay envelope.
admissibility  Existence / nonexistence classification of problem data.
radial         Radial grids and profiles, energy and its discrete gradient,
               ODE shooting and the numerical mountain-pass solver.
diagnostics    Certificate-style checks on profiles: Pohozaev residual,
               radial decay constant, level-set energies, boundedness report.
cli            Batch front door with machine-readable output.
"""

from .nfunction import (
    NFunction, IndexPair, NotAdmissibleError, ComparisonVerdict,
    make_catalog, scaled_power, simonenko_indices, complementary, young_gap,
    check_delta2, compare_at_infinity, xi_bounds, compose_inverse,
    critical_exponent, psi_growth, psi_functions,
)
from .luxemburg import (
    WeightedMeasure, SampledFunction, NonNormableError,
    modular, luxemburg_norm, strauss_envelope, envelope_table, holder_gap,
)
from .quadrature import DivergentIntegralError
from .admissibility import (
    ProblemSpec, ClassificationReport, Verdict, IntegralVerdict,
    check_superlinearity, check_admissibility_integral, check_nonexistence,
    check_boundedness_hypothesis, critical_alpha_threshold, classify,
)
from .radial import (
    RadialGrid, RadialProfile, SolverConfig, HenonSource, ConstantSource,
    sphere_area, energy, energy_gradient, weak_residual,
    shoot, solve_shooting, find_e, mountain_pass_solve, geometry_check,
    NoBracketError, PositivityViolationError, NonConvergenceError,
    PathCollapseError, NotSuperlinearError, RefusedByClassificationError,
)
from .diagnostics import (
    PohozaevReport, NonexistenceAudit, StraussReport,
    pohozaev_residual, nonexistence_audit, nonexistence_factor,
    strauss_check, degiorgi_levels, boundedness_report,
)

__version__ = "0.1.0"
