"""Restricted Siegel disks of perturbed maps by orbit confinement."""

import numpy as np
from loguru import logger
from scipy import ndimage

from ..core.errors import ZeroComponentError
from ..measure.grid import GridField, GridSpec, Tag
from ..measure.kernels import confinement_kernel


def restricted_siegel_field(perturbed_map, base_disk: GridField, horizon: int) -> GridField:
    """
    Cells of ``base_disk`` whose centre orbit stays in its in-cells for ``horizon``
    steps, cut down to the connected component of the cell holding 0.

    Undecided cells of the base disk stay undecided.

    Raises:
        ZeroComponentError: the cell containing 0 did not survive
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    spec = base_disk.spec
    allowed = np.ascontiguousarray(base_disk.inside.astype(np.uint8))
    coeffs = np.ascontiguousarray(perturbed_map.effective_coeffs, dtype=np.complex128)
    survivors = confinement_kernel(coeffs, allowed, spec.xmin, spec.ymin, spec.dx, spec.dy, int(horizon))

    row, col = spec.cell_of(0j)
    if not survivors[row, col]:
        raise ZeroComponentError(
            "Cell containing 0 left the disk", {"map": perturbed_map.label(), "horizon": horizon, **spec.to_dict()}
        )
    labels, count = ndimage.label(survivors)
    component = labels == labels[row, col]
    logger.debug(
        f"{perturbed_map.label()}: {int(survivors.sum())} confined cells in {count} components, "
        f"{int(component.sum())} connected to 0"
    )
    params = {**base_disk.params, "map": perturbed_map.label(), "horizon": int(horizon), "kind": "restricted"}
    return GridField.from_mask(spec, component, undecided=base_disk.undecided, params=params)


def preimage_components(fmap, polyline, bbox, resolution: int) -> int:
    """Connected components of f^-1 of the polyline-bounded region, counted on a grid."""
    spec = bbox if isinstance(bbox, GridSpec) else GridSpec.square(bbox, resolution)
    images = np.asarray(fmap.eval(spec.centers().ravel()))
    inside = polyline.contains(images).reshape(spec.shape)
    _, count = ndimage.label(inside)
    return int(count)


def forward_invariance_defect(fmap, field_: GridField) -> int:
    """Number of in-cells whose centre image lands outside the in and undecided cells."""
    spec = field_.spec
    z = spec.centers()[field_.inside]
    w = np.asarray(fmap.eval(z))
    col = np.floor((w.real - spec.xmin) / spec.dx).astype(np.int64)
    row = np.floor((w.imag - spec.ymin) / spec.dy).astype(np.int64)
    on_grid = (col >= 0) & (col < spec.nx) & (row >= 0) & (row < spec.ny)
    ok = np.zeros(len(z), dtype=bool)
    ok[on_grid] = field_.tags[row[on_grid], col[on_grid]] != Tag.OUT
    return int(np.count_nonzero(~ok))
