"""Hyperbolic-type metrics on canonical Euclidean domains and a harness that checks their inequalities."""

from __future__ import annotations

from .boundary_sup import SupSolverConfig, s_metric, s_oracle, v_metric, v_oracle
from .closed_forms import (MetricKind, MetricValue, j_metric, j_star, p_function, rho_ball, rho_halfspace,
                           rho_mobius_ball, s_halfspace)
from .conformal import (BallAutomorphism, CayleyBallToHalfspace, CayleyHalfspaceToBall, DilatationEstimate,
                        MapSpec, RadialStretch, apply_map, check_mobius_j_k_distortion, check_p_mobius_bounds,
                        check_qr_holder_bound, check_s_mobius_bound, empirical_bilipschitz_constant,
                        linear_dilatation)
from .geom import (Ball, BallComplement, CutDisk, Domain, DomainError, HalfSpace, KochPolygon, Polygon,
                   PuncturedSpace, Strip, angle_at, boundary_distance, boundary_param, domain_diameter,
                   parse_domain, unit_square)
from .harness import InequalityCase, emit_report, registry, run_case, run_suite, sharpness_suite
from .quasihyperbolic import GeodesicGraphConfig, check_kz_lemma, k_exact_halfspace, k_numeric
from .report import VerificationReport
from .special_domains import (ConditionWitness, h_delta_check, nonlinearity_delta_estimate,
                              strip_constant)

__version__ = "0.1.0"
