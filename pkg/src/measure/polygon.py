"""Grid rasterization of closed polylines."""

from typing import Any, Dict, Optional

import numpy as np
from scipy import ndimage
from skimage.draw import polygon2mask

from .grid import GridField, GridSpec


def _vertices(curve) -> np.ndarray:
    return np.asarray(getattr(curve, "points", curve), dtype=complex)


def polygon_mask(curve, spec: GridSpec) -> np.ndarray:
    """Cells whose centre lies inside the closed polyline."""
    return polygon2mask(spec.shape, spec.to_pixel(_vertices(curve)))


def rasterize_polygon(curve, spec: GridSpec, params: Optional[Dict[str, Any]] = None) -> GridField:
    """
    Tag cells of the region bounded by a closed polyline.

    Cells on either side of the boundary (one morphological layer each) are
    undecided; the rest follow centre membership.
    """
    inside = polygon_mask(curve, spec)
    ring = ndimage.binary_dilation(inside) & ~ndimage.binary_erosion(inside)
    return GridField.from_mask(spec, inside, undecided=ring, params=params)


def region_distance(curve, spec: GridSpec) -> np.ndarray:
    """Euclidean distance from each cell centre to the polyline-bounded region (0 inside)."""
    inside = polygon_mask(curve, spec)
    if not inside.any():
        raise ValueError("polyline encloses no cell centre")
    return ndimage.distance_transform_edt(~inside, sampling=(spec.dy, spec.dx))
