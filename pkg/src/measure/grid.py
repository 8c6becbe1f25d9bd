"""Grid fields over complex bounding boxes with exact cell bookkeeping."""

from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Any, Dict, Tuple

import numpy as np

from ..core.errors import EmptyRegionError


class Tag(IntEnum):
    """Cell tag"""
    OUT = 0
    IN = 1
    UNDECIDED = 2


@dataclass(frozen=True)
class GridSpec:
    """
    Rectangle [xmin, xmax] x [ymin, ymax] split into nx by ny cells.

    Row j holds cells centred at y = ymin + (j + 1/2) dy, so row 0 is the bottom.
    """
    xmin: float
    ymin: float
    xmax: float
    ymax: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError("degenerate bounding box")
        if self.nx < 1 or self.ny < 1:
            raise ValueError("resolution must be positive")

    @classmethod
    def square(cls, bbox, resolution: int) -> "GridSpec":
        xmin, ymin, xmax, ymax = (float(v) for v in bbox)
        return cls(xmin, ymin, xmax, ymax, int(resolution), int(resolution))

    @classmethod
    def around(cls, points: np.ndarray, pad: float, resolution: int) -> "GridSpec":
        """Square-cell grid covering points plus a relative padding."""
        x0, x1 = float(np.min(points.real)), float(np.max(points.real))
        y0, y1 = float(np.min(points.imag)), float(np.max(points.imag))
        half = 0.5 * max(x1 - x0, y1 - y0) * (1 + 2 * pad)
        cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        return cls(cx - half, cy - half, cx + half, cy + half, int(resolution), int(resolution))

    @property
    def bbox(self) -> Tuple[float, float, float, float]:
        return (self.xmin, self.ymin, self.xmax, self.ymax)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def dx(self) -> float:
        return (self.xmax - self.xmin) / self.nx

    @property
    def dy(self) -> float:
        return (self.ymax - self.ymin) / self.ny

    @property
    def cell_side(self) -> float:
        return max(self.dx, self.dy)

    @property
    def bbox_area_exact(self) -> Fraction:
        return (Fraction(self.xmax) - Fraction(self.xmin)) * (Fraction(self.ymax) - Fraction(self.ymin))

    @property
    def cell_area_exact(self) -> Fraction:
        return self.bbox_area_exact / (self.nx * self.ny)

    @property
    def cell_area(self) -> float:
        return float(self.cell_area_exact)

    def centers(self) -> np.ndarray:
        """Complex cell centres, shape (ny, nx)."""
        x = self.xmin + (np.arange(self.nx) + 0.5) * self.dx
        y = self.ymin + (np.arange(self.ny) + 0.5) * self.dy
        return x[None, :] + 1j * y[:, None]

    def cell_of(self, z: complex) -> Tuple[int, int]:
        """(row, col) of the cell containing z."""
        col = int(np.floor((z.real - self.xmin) / self.dx))
        row = int(np.floor((z.imag - self.ymin) / self.dy))
        if not (0 <= col < self.nx and 0 <= row < self.ny):
            raise ValueError(f"point {z} outside the grid")
        return row, col

    def to_pixel(self, z: np.ndarray) -> np.ndarray:
        """(row, col) float coordinates with cell centres at integers."""
        z = np.asarray(z, dtype=complex)
        return np.column_stack([(z.imag - self.ymin) / self.dy - 0.5, (z.real - self.xmin) / self.dx - 0.5])

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {"bbox": list(self.bbox), "nx": self.nx, "ny": self.ny}


@dataclass
class GridField:
    """Per-cell tags over a grid; immutable once built."""
    spec: GridSpec
    tags: np.ndarray
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.tags = np.ascontiguousarray(self.tags, dtype=np.uint8)
        if self.tags.shape != self.spec.shape:
            raise ValueError(f"tags shape {self.tags.shape} != grid shape {self.spec.shape}")
        self.tags.setflags(write=False)

    @classmethod
    def from_mask(cls, spec: GridSpec, inside: np.ndarray, undecided: np.ndarray | None = None,
                  params: Dict[str, Any] | None = None) -> "GridField":
        tags = np.where(inside, Tag.IN, Tag.OUT).astype(np.uint8)
        if undecided is not None:
            tags[undecided] = Tag.UNDECIDED
        return cls(spec, tags, dict(params or {}))

    @property
    def inside(self) -> np.ndarray:
        return self.tags == Tag.IN

    @property
    def undecided(self) -> np.ndarray:
        return self.tags == Tag.UNDECIDED

    def counts(self) -> Dict[str, int]:
        c = np.bincount(self.tags.ravel(), minlength=3)
        return {"in": int(c[Tag.IN]), "out": int(c[Tag.OUT]), "undecided": int(c[Tag.UNDECIDED])}

    def same_grid(self, other: "GridField") -> bool:
        return self.spec == other.spec


@dataclass(frozen=True)
class AreaEstimate:
    """value and value + undecided_mass bracket the grid measure."""
    value: float
    undecided_mass: float
    params: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {"value": self.value, "undecided_mass": self.undecided_mass, **self.params}


def area(field_: GridField) -> AreaEstimate:
    c = field_.counts()
    cell = field_.spec.cell_area_exact
    return AreaEstimate(
        value=float(cell * c["in"]),
        undecided_mass=float(cell * c["undecided"]),
        params={**field_.params, **field_.spec.to_dict()},
    )


def dens_detail(U: GridField, X: GridField) -> Dict[str, Any]:
    """
    dens_U(X) with its cell counts.

    Cells undecided in either field are dropped from numerator and denominator.

    Raises:
        EmptyRegionError: U has no decided member cells
    """
    if not U.same_grid(X):
        raise ValueError("dens needs fields on the same grid")
    decided = ~(U.undecided | X.undecided)
    u_in = U.inside & decided
    denominator = int(np.count_nonzero(u_in))
    if denominator == 0:
        raise EmptyRegionError("Reference region has no decided cells", U.spec.to_dict())
    numerator = int(np.count_nonzero(u_in & X.inside))
    return {
        "dens": numerator / denominator,
        "numerator": numerator,
        "denominator": denominator,
        "excluded": int(np.count_nonzero(U.inside & ~decided)),
    }


def dens(U: GridField, X: GridField) -> float:
    """area(U ∩ X) / area(U) over decided cells."""
    return dens_detail(U, X)["dens"]


def window_field(U: GridField, window) -> GridField:
    """Restrict U to a sub-window given as [fx0, fx1, fy0, fy1] fractions of its grid."""
    fx0, fx1, fy0, fy1 = window
    ny, nx = U.spec.shape
    keep = np.zeros(U.spec.shape, dtype=bool)
    keep[int(round(fy0 * ny)):int(round(fy1 * ny)), int(round(fx0 * nx)):int(round(fx1 * nx))] = True
    tags = np.where(keep, U.tags, Tag.OUT).astype(np.uint8)
    return GridField(U.spec, tags, {**U.params, "window": list(window)})
