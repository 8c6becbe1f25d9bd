"""Box-counting dimension of field boundaries and refinement checks."""

from typing import Any, Dict, Sequence

import numpy as np
from scipy import ndimage

from .grid import GridField
from ..core.errors import InsufficientScalesError


MIN_SCALES = 4
_CROSS = ndimage.generate_binary_structure(2, 1)


def boundary_cells(field_: GridField) -> np.ndarray:
    """In-cells with at least one 4-neighbour out-cell."""
    out = ~field_.inside & ~field_.undecided
    return field_.inside & ndimage.binary_dilation(out, structure=_CROSS)


def box_counts(mask: np.ndarray, scales: Sequence[int]) -> Dict[int, int]:
    counts = {}
    for s in scales:
        boxes = np.add.reduceat(
            np.add.reduceat(mask.astype(np.int64), np.arange(0, mask.shape[0], s), axis=0),
            np.arange(0, mask.shape[1], s), axis=1,
        )
        counts[int(s)] = int(np.count_nonzero(boxes))
    return counts


def box_dimension_detail(field_: GridField, scales: Sequence[int]) -> Dict[str, Any]:
    """
    Least-squares slope of log N(s) against log(1/s) over boundary cells.

    Raises:
        InsufficientScalesError: fewer than four usable scales
    """
    mask = boundary_cells(field_)
    usable = sorted({int(s) for s in scales if 1 <= int(s) < min(mask.shape)})
    counts = {s: n for s, n in box_counts(mask, usable).items() if n > 0}
    if len(counts) < MIN_SCALES:
        raise InsufficientScalesError(
            "Box counting needs at least four usable scales", {"scales": list(scales), "usable": list(counts)}
        )
    s = np.array(sorted(counts), dtype=float)
    n = np.array([counts[int(k)] for k in s], dtype=float)
    slope, intercept = np.polyfit(np.log(1.0 / s), np.log(n), 1)
    residual = np.log(n) - (slope * np.log(1.0 / s) + intercept)
    return {
        "dimension": float(slope),
        "counts": {int(k): counts[int(k)] for k in s},
        "fit_residual": float(np.max(np.abs(residual))),
        "boundary_cells": int(np.count_nonzero(mask)),
    }


def box_dimension(field_: GridField, scales: Sequence[int]) -> float:
    return box_dimension_detail(field_, scales)["dimension"]


def boundary_area(field_: GridField) -> float:
    """Area of the boundary cells; shrinks with the cell size when the boundary has zero area."""
    return float(field_.spec.cell_area_exact * int(np.count_nonzero(boundary_cells(field_))))


def refinement_consistency(coarse: GridField, fine: GridField, c_bound: float = 2.0) -> Dict[str, Any]:
    """
    Compare in-areas at two resolutions of the same bbox.

    Passes when the difference is at most c_bound boundary-cell areas of the coarse field.
    """
    coarse_area = float(coarse.spec.cell_area_exact * int(np.count_nonzero(coarse.inside)))
    fine_area = float(fine.spec.cell_area_exact * int(np.count_nonzero(fine.inside)))
    bound = c_bound * boundary_area(coarse)
    diff = abs(coarse_area - fine_area)
    return {
        "area_coarse": coarse_area,
        "area_fine": fine_area,
        "difference": diff,
        "bound": bound,
        "ratio": diff / bound if bound > 0 else float("inf"),
        "passed": diff <= bound,
    }
