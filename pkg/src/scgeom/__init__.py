"""Strongly convex (r-convex) sets in the plane and in R^d: lenses, short
arcs, r-hulls, moduli of convexity and r-convexity tests."""

from .bodies import CircularArc, ConvexPolygon, DiskPolygon, ImplicitBody, NormalCone, intersect_disks
from .errors import (
    BudgetError,
    DegenerateChordError,
    DimensionError,
    DomainError,
    EmptyBodyError,
    GeometryError,
    InfeasibleError,
    NoContainingBallError,
    ScheduleError,
)
from .geometry_core import Ball, Tolerance, ball_limit_constant, ball_modulus, min_enclosing_ball
from .lens_arc import UNIVERSE, Lens, ShortArc, arc_property, arc_sample, lens, lens_contains, short_arc, short_arcs
from .modulus import (
    Budget,
    LimitEstimate,
    ModulusSample,
    delta_circ,
    delta_circ_threshold_test,
    delta_omega,
    limit_estimate,
    threshold_test,
)
from .rconvex import (
    RefinementTrace,
    arc_radius_bound,
    condition_A_check,
    condition_C_check,
    is_r_convex,
    local_r_convex_check,
    r_hull,
    radius_refinement,
    spherical_support_at,
    spherical_support_local,
)
from .reports import RConvexityReport

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "Budget",
    "BudgetError",
    "CircularArc",
    "ConvexPolygon",
    "DegenerateChordError",
    "DimensionError",
    "DiskPolygon",
    "DomainError",
    "EmptyBodyError",
    "GeometryError",
    "ImplicitBody",
    "InfeasibleError",
    "Lens",
    "LimitEstimate",
    "ModulusSample",
    "NoContainingBallError",
    "NormalCone",
    "RConvexityReport",
    "RefinementTrace",
    "ScheduleError",
    "ShortArc",
    "Tolerance",
    "UNIVERSE",
    "arc_property",
    "arc_radius_bound",
    "arc_sample",
    "ball_limit_constant",
    "ball_modulus",
    "condition_A_check",
    "condition_C_check",
    "delta_circ",
    "delta_circ_threshold_test",
    "delta_omega",
    "intersect_disks",
    "is_r_convex",
    "lens",
    "lens_contains",
    "limit_estimate",
    "local_r_convex_check",
    "min_enclosing_ball",
    "r_hull",
    "radius_refinement",
    "short_arc",
    "short_arcs",
    "spherical_support_at",
    "spherical_support_local",
    "threshold_test",
]
