"""Polynomial families, orbits, root finding and the domain V"""

from .families import Family, PolynomialMap
from .domain import IS_DOMAIN, ISDomain, is_in_V
from .orbit import OrbitRecord, orbit, postcritical_excursion, segment_distance
from .roots import cluster_roots, count_preimages_in, polynomial_roots
from .quadlike import QuadraticLikeCheck, QuadraticLikeRadius, quadratic_like_radius, verify_quadratic_like

__all__ = [
    "Family",
    "PolynomialMap",
    "IS_DOMAIN",
    "ISDomain",
    "is_in_V",
    "OrbitRecord",
    "orbit",
    "postcritical_excursion",
    "segment_distance",
    "cluster_roots",
    "count_preimages_in",
    "polynomial_roots",
    "QuadraticLikeCheck",
    "QuadraticLikeRadius",
    "quadratic_like_radius",
    "verify_quadratic_like",
]
