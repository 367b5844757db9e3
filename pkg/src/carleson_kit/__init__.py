"""Numerical toolkit for free-interpolation geometry in the unit disk:
kernels and pseudo-hyperbolic metrics, discrete Hardy-space calculus,
Carleson measures, model subspaces, Riesz-system diagnostics, level
contours of bounded functions, contour-net constructions, and the
weighted exponential-system hierarchy.
"""

from .blaschke import (BlaschkeProduct, InterpolationReport, interpolation_constants,
                       net_is_valid, place_net_on_curve, projection_norm_formula)
from .carleson import (CurveMeasure, DiscreteMeasure, carleson_norm,
                       embedding_constant_empirical, kernel_test_constant)
from .construction import (ConstructionConfig, ContourNetEntry, PointSystem,
                           build_contour_nets, check_two_eps_margins, condition_sums,
                           epsilon_net_split, estimate_cv, lemma_10_1_check,
                           measure_c_alpha, n_power_for, product_defect_bound,
                           unit_sphere_net, validate_epsilon_choice)
from .contour import (BoundedFunction, ContourConstants, ContourResult,
                      RepresentingMeasure, bourgain_contour, check_potential_bounds,
                      harmonic_measure, select_bad_intervals, verify_region)
from .disk import (Arc, CarlesonSquare, DiskPoint, DyadicGrid, blaschke_factor,
                   dyadic_arc, hyperbolic_distance, hyperbolic_grid, kernel,
                   kernel_inner, pseudo_hyperbolic, pseudo_hyperbolic_disk)
from .errors import (ContourBoundError, DomainError, LinearDependenceError,
                     NetValidityError, ResolutionWarning)
from .hardy import (BoundaryGrid, HardyFunction, garsia_sum,
                    hankel_embedding_constant, outer_from_modulus, outer_log_at,
                    poisson_extend, riesz_project)
from .model_space import (MatrixFunction, ModelSubspace, ModelTriple, covering_count,
                          det_theta, det_theta_many, distance_analytic,
                          distance_coanalytic, distance_kernel_datum, kernel_grid,
                          project_model, residual_norm_coanalytic,
                          support_cover_count, triple_from_theta,
                          two_component_project)
from .riesz import (SubspaceSystem, dual_system, embedding_norm,
                    extract_critical_subset, orthogonalizer_condition,
                    skew_projection_norm, tensor_bound_check, uniform_minimality)
from .weights import Weight, classify_weight, p0_norm_check

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
