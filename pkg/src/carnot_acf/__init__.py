"""ACF functional, mean values and sub-Laplacian calculus on ℝᴺ and ℍ¹."""

from .errors import (CarnotError, InvalidArgumentError, ParseError, QuadratureError,
                     SingularityError, UnsupportedGroupError)
from .functionals import (MonotonicityReport, RadialScan, SignedPart, Trend, acf_j,
                          acf_j_representation, acf_j_tilde, acf_j_tilde_representation,
                          mean_value, radial_scan, scaling_identity_check, scan_monotonicity)
from .gauge import GaugeGeometry, gamma, gauge_norm, geometry_for, kernel_K
from .groups import CarnotGroup, euclidean, group_from_json, heisenberg1, step2
from .operators import (check_odd_symmetry, dilate_polynomial, g_degree, grad_norm_sq,
                        horizontal_gradient, is_harmonic, scale_function, sub_laplacian, translate)
from .polynomial import Polynomial, PolyRing
from .quadrature import (Integrand, QuadEstimate, Resolution, coarea_consistency, shell_integral,
                         solid_integral, sphere_integral)

__all__ = [
    "CarnotError", "InvalidArgumentError", "ParseError", "QuadratureError", "SingularityError",
    "UnsupportedGroupError", "MonotonicityReport", "RadialScan", "SignedPart", "Trend", "acf_j",
    "acf_j_representation", "acf_j_tilde", "acf_j_tilde_representation", "mean_value",
    "radial_scan", "scaling_identity_check", "scan_monotonicity", "GaugeGeometry", "gamma",
    "gauge_norm", "geometry_for", "kernel_K", "CarnotGroup", "euclidean", "group_from_json",
    "heisenberg1", "step2", "check_odd_symmetry", "dilate_polynomial", "g_degree",
    "grad_norm_sq", "horizontal_gradient", "is_harmonic", "scale_function", "sub_laplacian",
    "translate", "Polynomial", "PolyRing", "Integrand", "QuadEstimate", "Resolution",
    "coarea_consistency", "shell_integral", "solid_integral", "sphere_integral",
]
