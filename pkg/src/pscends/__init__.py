"""Numerical verification of warped circle-bundle metrics with positive scalar
curvature on noncompact ends, and of level-set band-width inequalities in
rotationally symmetric bands.

Subpackages:

- ``chart_curvature``: finite-difference curvature oracle for arbitrary charts
- ``bundle_metric``: closed-form scalar curvature, case profiles, thresholds,
  positivity certificates
- ``catalog``: concrete bundle geometries (nil-type, sphere-base, products)
- ``band``: tangent potential, level functional and solver, stability and
  band-width audits, area-growth hypothesis checker
- ``sweep``: seeded randomized falsification sweeps
- ``reports`` / ``cli``: configuration, reports, CSV emission, command line
"""

__version__ = "0.1.0"

from .errors import (BoundaryEscapeError, DegenerateMetricError, DomainError,
                     HypothesisError, UnreliableStepError)
from .chart_curvature import (ChartMetric, CurvatureReport, christoffel,
                              euclidean_chart, product_chart, ricci, riemann,
                              scalar_curvature, scalar_value)
from .bundle_metric import (BaseGeometry, PositivityCertificate, WarpProfile,
                            case_lower_bound, case_profile, case_scalar_formula,
                            certify, flat_base, scalar_closed_form, threshold)
from .catalog import (CatalogEntry, catalog_entries, fiber_length, get_entry,
                      heisenberg_entry, hopf_entry, omega_norm_from_chart,
                      trivial_entry)
from .band import (AREA_GROWTH_THRESHOLD, AuditResult, BandModel,
                   HypothesisCheck, MuBubbleSolution, PotentialParams,
                   band_scalar, band_width_audit, band_width_bound, functional,
                   minimize, potential, potential_bound_check,
                   potential_derivative, stability_report, theorem1_hypothesis)
from .families import SplineWarp, WarpFamily, check_derivatives, parse_warp_spec
from .oracle_compare import agreement_rows, closed_form_vs_oracle
from .sweep import audit_sweep, random_band_model, solve_random_models

__all__ = [name for name in dir() if not name.startswith("_")]
