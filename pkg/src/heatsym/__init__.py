"""Numerical verification toolkit for heat-flow symmetry questions.

The library evaluates compactly supported heat-kernel convolutions to
near machine precision, checks the sphere-convolution eigenvalue
identities behind the density arguments, detects broken parity or
rotation symmetry of initial data through weighted moments, and builds
a non-radial caloric function whose single level sphere travels
outward.  ``acceptance.run_all`` drives the whole check matrix and the
``heatsym`` console script exposes the same suites on the command line.
"""

from .acceptance import CriterionResult, run_all, run_criterion, suite_listing
from .config import DEFAULT_SEED
from .counterexample import (
    LevelSphereRecord,
    MollifierProfile,
    build_mollifier,
    build_psi,
    counterexample_sweep,
    eval_counterexample,
    f_level,
    find_brackets,
    find_level_radius,
    find_similarity_time,
)
from .errors import ConvergenceError, EvaluationError, StructureError
from .harmonics import (
    funk_hecke_eigenvalue,
    funk_hecke_lambda_closed,
    funk_hecke_lambda_direct,
    harmonic_catalog,
    harmonic_poly,
    legendre_eval,
    sphere_grid,
)
from .heat import (
    directional_derivative,
    fourth_derivative_1d,
    solve_1d,
    solve_nd,
    solve_radial_3d,
    third_derivative_1d,
)
from .profiles import (
    InitialDataND,
    InitialProfile1D,
    bump_1d,
    difference_profile,
    offset_bump_nd,
    perturbed_bump_nd,
    radial_bump_nd,
    truncated_gaussian_1d,
    truncated_gaussian_nd,
)
from .symmetry import (
    AlignmentResult,
    BoundarySample,
    ConstancyReport,
    TimeSequence,
    check_scaled_boundary,
    circle_boundary,
    ellipse_boundary,
    ellipsoid_boundary,
    harmonic_coefficients,
    laplace_moment_1d,
    moment_1d,
    moment_nd,
    monotonicity_margin,
    normal_alignment,
    perturb_normals,
    rotation_catalog,
    sphere_boundary,
    spherical_moment,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentResult",
    "BoundarySample",
    "ConstancyReport",
    "ConvergenceError",
    "CriterionResult",
    "DEFAULT_SEED",
    "EvaluationError",
    "InitialDataND",
    "InitialProfile1D",
    "LevelSphereRecord",
    "MollifierProfile",
    "StructureError",
    "TimeSequence",
    "build_mollifier",
    "build_psi",
    "bump_1d",
    "check_scaled_boundary",
    "circle_boundary",
    "counterexample_sweep",
    "difference_profile",
    "directional_derivative",
    "ellipse_boundary",
    "ellipsoid_boundary",
    "eval_counterexample",
    "f_level",
    "find_brackets",
    "find_level_radius",
    "find_similarity_time",
    "fourth_derivative_1d",
    "funk_hecke_eigenvalue",
    "funk_hecke_lambda_closed",
    "funk_hecke_lambda_direct",
    "harmonic_catalog",
    "harmonic_coefficients",
    "harmonic_poly",
    "laplace_moment_1d",
    "legendre_eval",
    "moment_1d",
    "moment_nd",
    "monotonicity_margin",
    "normal_alignment",
    "offset_bump_nd",
    "perturb_normals",
    "perturbed_bump_nd",
    "radial_bump_nd",
    "rotation_catalog",
    "run_all",
    "run_criterion",
    "solve_1d",
    "solve_nd",
    "solve_radial_3d",
    "sphere_boundary",
    "sphere_grid",
    "spherical_moment",
    "suite_listing",
    "third_derivative_1d",
    "truncated_gaussian_1d",
    "truncated_gaussian_nd",
]
