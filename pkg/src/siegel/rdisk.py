"""r-disk boundaries of Siegel disks as closed polylines."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
import pandas as pd
from skimage.measure import points_in_poly

from .linearization import LinearizationSeries
from ..core.errors import SeriesDivergenceError
from ..measure.grid import GridField, GridSpec
from ..measure.polygon import rasterize_polygon


MIN_POINTS = 16
# largest admissible |b_k| rho^k / rho over the last coefficients
TAIL_TOLERANCE = 1e-6


def _cross(a: complex, b: complex) -> float:
    return a.real * b.imag - a.imag * b.real


@dataclass
class Polyline:
    """Closed curve through ``points``; the last vertex joins the first."""
    points: np.ndarray
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=complex)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def diameter(self) -> float:
        p = self.points
        return max(float(np.max(np.abs(p - q))) for q in p)

    def winding_number(self, z: complex = 0j) -> int:
        d = self.points - z
        turns = np.angle(np.roll(d, -1) / d)
        return int(round(float(np.sum(turns)) / (2 * np.pi)))

    def contains(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        poly = np.column_stack([self.points.real, self.points.imag])
        return points_in_poly(np.column_stack([z.real, z.imag]), poly)

    def is_simple(self) -> bool:
        """No two non-adjacent edges intersect."""
        a = self.points
        b = np.roll(a, -1)
        m = len(a)
        ab = b - a
        for i in range(m):
            # edges i+2 .. m-1 (skip the edge sharing the closing vertex)
            j = np.arange(i + 2, m if i > 0 else m - 1)
            if len(j) == 0:
                continue
            c, d = a[j], b[j]
            d1 = np.imag(np.conj(ab[i]) * (c - a[i]))
            d2 = np.imag(np.conj(ab[i]) * (d - a[i]))
            cd = d - c
            d3 = np.imag(np.conj(cd) * (a[i] - c))
            d4 = np.imag(np.conj(cd) * (b[i] - c))
            if np.any((d1 * d2 < 0) & (d3 * d4 < 0)):
                return False
        return True

    def strictly_inside(self, other: "Polyline") -> bool:
        """Every vertex lies inside ``other`` and the two curves do not cross."""
        return bool(np.all(other.contains(self.points))) and not np.any(self.contains(other.points))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"k": np.arange(len(self.points)), "re": self.points.real, "im": self.points.imag})

    def save_csv(self, path: Union[str, Path]) -> Path:
        """CSV with columns k, re, im."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format="%.17g")
        return path

    @classmethod
    def load_csv(cls, path: Union[str, Path]) -> "Polyline":
        df = pd.read_csv(path)
        return cls(df["re"].to_numpy() + 1j * df["im"].to_numpy())


def rdisk_boundary(series: LinearizationSeries, r: float, m: int) -> Polyline:
    """
    Image of the circle of radius r * radius_estimate under phi, sampled at m points.

    Raises:
        SeriesDivergenceError: the truncated series is not converged at that radius
    """
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    if m < MIN_POINTS:
        raise ValueError(f"need at least {MIN_POINTS} points")
    if series.radius.unbounded:
        raise SeriesDivergenceError("Radius estimate is unbounded; r-disk is undefined", {"r": r})
    rho = r * series.radius_estimate
    tail = series.tail_term(rho)
    if not np.isfinite(tail) or tail > TAIL_TOLERANCE:
        raise SeriesDivergenceError(
            "Series tail not converged at requested radius", {"r": r, "rho": rho, "tail": tail, "K": series.K}
        )
    points = series(rho * np.exp(2j * np.pi * np.arange(m) / m))
    return Polyline(points, {"r": r, "rho": rho, "tail": tail, "map": series.label})


def rasterize_polyline(polyline: Polyline, bbox, resolution: int) -> GridField:
    """Cell-centre membership with the cells along the curve tagged undecided."""
    spec = bbox if isinstance(bbox, GridSpec) else GridSpec.square(bbox, resolution)
    return rasterize_polygon(polyline, spec, {**polyline.params, "kind": "rdisk"})
