"""Siegel disk linearization, r-disks and restricted disks"""

from .linearization import (
    LinearizationSeries,
    RadiusEstimate,
    conformal_radius,
    estimate_radius,
    linearize,
    linearize_coefficients,
    small_denominators,
)
from .rdisk import Polyline, rasterize_polyline, rdisk_boundary
from .restricted import forward_invariance_defect, preimage_components, restricted_siegel_field

__all__ = [
    "LinearizationSeries",
    "RadiusEstimate",
    "conformal_radius",
    "estimate_radius",
    "linearize",
    "linearize_coefficients",
    "small_denominators",
    "Polyline",
    "rasterize_polyline",
    "rdisk_boundary",
    "forward_invariance_defect",
    "preimage_components",
    "restricted_siegel_field",
]
