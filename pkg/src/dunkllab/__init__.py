"""Numerical laboratory for rational Dunkl analysis.

Finite reflection groups with weighted measures, Dunkl operators, the
Dunkl transform, heat-type kernels generated by powers of directional
Dunkl operators, and a harness of quantitative checks for their decay
and coercivity properties.
"""

from .errors import (AccuracyError, CapabilityError, ConfigError,
                     DomainTooSmallError, DunklLabError,
                     FitConvergenceError, GroupExplosionError,
                     InvalidRootSystemError, SymbolError)
from .fitting import DecayFitReport, alternating_split, fit_decay_exponent
from .forms import BilinearFormSpec, form_a_s, form_b_s_eps, sobolev_norm_V
from .functions import (CallableFunction, GridSampled, PolyGauss, gaussian,
                        hermite_family, hermite_gauss, monomial_gauss,
                        radial_bump)
from .dunkl_kernel import dunkl_kernel_E, kernel_series
from .harness import (AUX_KINDS, check_auxiliary_bounds, check_garding,
                      check_heat_gaussian_bound, check_thm1_decay,
                      check_two_point_bound, make_pair_grid)
from .kernels import (KERNEL_CHECK_KINDS, KernelSpec, dunkl_translate,
                      evaluate_q, freq_box_for, heat_kernel,
                      heat_kernel_two_point, kernel_identity_check,
                      q_on_grid, translate_at_points, two_point_kernel)
from .measure import (WeightedContext, ball_volume, eta, volume_max,
                      weight_density, weighted_norm)
from .operators import (apply_dunkl, apply_dunkl_iterated, dunkl_laplacian,
                        positive_roots)
from .quadrature import AxisRule, TensorGrid, integrate_checked
from .report import VerificationReport, grid_metadata
from .root_systems import (ReflectionGroup, RootSystemSpec, dihedral,
                           generate_group, orbit_distance,
                           orbit_distance_pairwise, product_z2, rank1,
                           reflect, reflection_matrix)
from .runner import config_schema, list_checks, run
from .transform import (SpectralFunction, dunkl_convolve, dunkl_transform,
                        inverse_at_points, inverse_dunkl_transform,
                        plancherel_defect, set_kernel_cache_limit)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "CapabilityError", "ConfigError", "DomainTooSmallError",
    "DunklLabError", "FitConvergenceError", "GroupExplosionError",
    "InvalidRootSystemError", "SymbolError",
    "DecayFitReport", "alternating_split", "fit_decay_exponent",
    "BilinearFormSpec", "form_a_s", "form_b_s_eps", "sobolev_norm_V",
    "CallableFunction", "GridSampled", "PolyGauss", "gaussian",
    "hermite_family", "hermite_gauss", "monomial_gauss", "radial_bump",
    "dunkl_kernel_E", "kernel_series",
    "AUX_KINDS", "check_auxiliary_bounds", "check_garding",
    "check_heat_gaussian_bound", "check_thm1_decay", "check_two_point_bound",
    "make_pair_grid",
    "KERNEL_CHECK_KINDS", "KernelSpec", "dunkl_translate", "evaluate_q",
    "freq_box_for", "heat_kernel", "heat_kernel_two_point",
    "kernel_identity_check", "q_on_grid", "translate_at_points",
    "two_point_kernel",
    "WeightedContext", "ball_volume", "eta", "volume_max", "weight_density",
    "weighted_norm",
    "apply_dunkl", "apply_dunkl_iterated", "dunkl_laplacian",
    "positive_roots",
    "AxisRule", "TensorGrid", "integrate_checked",
    "VerificationReport", "grid_metadata",
    "ReflectionGroup", "RootSystemSpec", "dihedral", "generate_group",
    "orbit_distance", "orbit_distance_pairwise", "product_z2", "rank1",
    "reflect", "reflection_matrix",
    "config_schema", "list_checks", "run",
    "SpectralFunction", "dunkl_convolve", "dunkl_transform",
    "inverse_at_points", "inverse_dunkl_transform", "plancherel_defect",
    "set_kernel_cache_limit",
    "__version__",
]
