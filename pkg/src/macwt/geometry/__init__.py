"""Exact rational linear-inequality machinery.

Everything here works over ``fractions.Fraction``: systems, Fourier-Motzkin
projection, simplex LP with dual/Farkas certificates, redundancy pruning,
polytope containment, 2D hulls and max-margin separation.
"""

from macwt.geometry.fme import fourier_motzkin_project, redundancy_prune
from macwt.geometry.hull2d import (
    convex_hull_2d,
    polygon_to_system,
    separate_point,
)
from macwt.geometry.simplex import LpResult, lp_solve, polytope_contains, polytope_equal
from macwt.geometry.systems import (
    LinearInequality,
    LinearSystem,
    contains_point,
    pin_variables,
    to_fixed_rational,
)

__all__ = [
    "LinearInequality",
    "LinearSystem",
    "LpResult",
    "contains_point",
    "convex_hull_2d",
    "fourier_motzkin_project",
    "lp_solve",
    "pin_variables",
    "polygon_to_system",
    "polytope_contains",
    "polytope_equal",
    "redundancy_prune",
    "separate_point",
    "to_fixed_rational",
]
