"""Filled Julia sets, delta-confinement sets and density profiles on grids."""

from typing import Any, Dict, List, Sequence

import numpy as np
from loguru import logger

from .grid import GridField, GridSpec, Tag
from .kernels import escape_kernel, neighborhood_kernel
from .polygon import region_distance
from ..core.errors import BboxTooSmallError, EmptyRegionError, RadiusBelowResolutionError


MIN_CELLS_PER_RADIUS = 3


def _coeffs(fmap) -> np.ndarray:
    return np.ascontiguousarray(fmap.effective_coeffs, dtype=np.complex128)


def _touches_border(mask: np.ndarray) -> bool:
    return bool(mask[0, :].any() or mask[-1, :].any() or mask[:, 0].any() or mask[:, -1].any())


def filled_julia_grid(fmap, bbox, resolution: int, horizon: int, R_escape: float = 10.0) -> GridField:
    """
    Escape-time field: in iff the centre orbit stays in |z| <= R_escape for horizon steps.

    Raises:
        BboxTooSmallError: an in-cell touches the bbox boundary
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    spec = bbox if isinstance(bbox, GridSpec) else GridSpec.square(bbox, resolution)
    tags = escape_kernel(
        _coeffs(fmap), spec.xmin, spec.ymin, spec.dx, spec.dy, spec.nx, spec.ny, int(horizon), float(R_escape)
    )
    if _touches_border(tags == Tag.IN):
        raise BboxTooSmallError("Filled Julia set reaches the bbox boundary", {"bbox": list(spec.bbox)})
    params = {"map": fmap.label(), "horizon": int(horizon), "R_escape": float(R_escape), "kind": "filled_julia"}
    field_ = GridField(spec, tags, params)
    logger.debug(f"filled Julia {fmap.label()} at {spec.nx}x{spec.ny}: {field_.counts()}")
    return field_


def k_delta_field(fmap, delta: float, siegel_polyline, bbox, resolution: int, horizon: int) -> GridField:
    """
    Cells whose orbit stays within distance delta of the polyline-bounded region.

    The region's distance transform is sampled bilinearly along the orbit.

    Raises:
        BboxTooSmallError: an in-cell touches the bbox boundary
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    spec = bbox if isinstance(bbox, GridSpec) else GridSpec.square(bbox, resolution)
    dist = region_distance(siegel_polyline, spec)
    tags = neighborhood_kernel(
        _coeffs(fmap), np.ascontiguousarray(dist), spec.xmin, spec.ymin, spec.dx, spec.dy, int(horizon), float(delta)
    )
    if _touches_border(tags == Tag.IN):
        raise BboxTooSmallError("K(delta) reaches the bbox boundary", {"bbox": list(spec.bbox), "delta": delta})
    params = {"map": fmap.label(), "horizon": int(horizon), "delta": float(delta), "kind": "k_delta"}
    return GridField(spec, tags, params)


def density_profile(z: complex, X: GridField, radii: Sequence[float]) -> List[float]:
    """
    dens over the ball B(z, r) for each radius, by cell-centre membership.

    Raises:
        RadiusBelowResolutionError: a radius is below three cell sides
    """
    return [row["dens"] for row in density_profile_detail(z, X, radii)]


def density_profile_detail(z: complex, X: GridField, radii: Sequence[float]) -> List[Dict[str, Any]]:
    spec = X.spec
    centers = None
    rows = []
    for r in radii:
        if r < MIN_CELLS_PER_RADIUS * spec.cell_side:
            raise RadiusBelowResolutionError(
                "Ball radius below resolution", {"radius": r, "cell_side": spec.cell_side}
            )
        if (z.real - r < spec.xmin or z.real + r > spec.xmax
                or z.imag - r < spec.ymin or z.imag + r > spec.ymax):
            raise ValueError(f"ball B({z}, {r}) leaves the grid")
        if centers is None:
            centers = spec.centers()
        ball = np.abs(centers - z) < r
        decided = ball & ~X.undecided
        n = int(np.count_nonzero(decided))
        if n == 0:
            raise EmptyRegionError("Ball has no decided cells", {"radius": r})
        hits = int(np.count_nonzero(decided & X.inside))
        rows.append({"radius": float(r), "dens": hits / n, "cells": n})
    return rows
