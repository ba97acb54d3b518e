"""Certified geometric lower bounds for the fundamental eigenvalue of the
p-Laplacian on planar domains with mixed Dirichlet/Neumann boundaries, with
an independent numerical eigenvalue oracle to verify every certificate."""

from ._kernels import backend
from .bounds import (BoundCertificate, ComparisonField, DirectionalProfileField,
                     RadialInward, RadialOutward, SampledVectorField,
                     annulus_bound, best_bound, boggio_bound, box_bound,
                     convex_bound, directional_boggio_bound, field_eval,
                     hardy_bound, hardy_constant, hardy_weight,
                     hardy_weight_field, interval_comparison_profile,
                     mixed_bound, monotonicity_bound, optimize_scale,
                     radial_hardy_bound, unit_sphere_measure)
from .errors import BracketError, ConvergenceError, ResolutionError
from .geometry import (DIRICHLET, NEUMANN, BoundaryPoint, Domain,
                       contains, directional_extent, eccentricity, first_hit,
                       is_convex, is_starlike_from_origin, radial_extent,
                       sample_boundary, validate_domain)
from .one_dim import (Arrangement, Exponent, RadialEigenProblem,
                      RadialEigenResult, mixed_interval_eigenvalue,
                      radial_eigenvalue, radial_fd_oracle, shoot_radial,
                      unit_interval_problem)
from .oracle import (Grid, LaplaceEigenResult, RayleighEstimate, ScalarField,
                     build_grid, laplace_eigen_p2, normal_derivative,
                     quadrature_check, rayleigh_minimize_p)

__version__ = "0.1.0"

__all__ = [
    "Arrangement", "BoundCertificate", "BoundaryPoint", "BracketError",
    "ComparisonField", "ConvergenceError", "DIRICHLET", "DirectionalProfileField",
    "Domain", "Exponent", "Grid", "LaplaceEigenResult", "NEUMANN",
    "RadialEigenProblem", "RadialEigenResult", "RadialInward", "RadialOutward",
    "RayleighEstimate", "ResolutionError", "SampledVectorField", "ScalarField",
    "annulus_bound", "backend", "best_bound", "boggio_bound", "box_bound",
    "build_grid", "contains", "convex_bound", "directional_boggio_bound",
    "directional_extent", "eccentricity", "field_eval", "first_hit",
    "hardy_bound", "hardy_constant", "hardy_weight", "hardy_weight_field",
    "interval_comparison_profile", "is_convex", "is_starlike_from_origin",
    "laplace_eigen_p2", "mixed_bound", "mixed_interval_eigenvalue",
    "monotonicity_bound", "normal_derivative", "optimize_scale",
    "quadrature_check", "radial_eigenvalue", "radial_extent",
    "radial_fd_oracle", "radial_hardy_bound", "rayleigh_minimize_p",
    "sample_boundary", "shoot_radial", "unit_interval_problem",
    "unit_sphere_measure", "validate_domain",
]
