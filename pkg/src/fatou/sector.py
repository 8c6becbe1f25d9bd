"""Sectors C and C# of a Fatou chart and the Exp projection."""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np
import pandas as pd
from skimage.measure import points_in_poly

from .chart import FatouChart


RE_LEFT, RE_RIGHT = 0.5, 1.5
IM_BOTTOM, IM_SPLIT = -2.0, 2.0
DEFAULT_TRUNCATION = 6.0


class SectorKind(str, Enum):
    C = "C"
    C_SHARP = "C_sharp"


def exp_map(zeta):
    """Exp(zeta) = conj(-4/27 e^{2 pi i zeta})."""
    out = np.conj(-4.0 / 27.0 * np.exp(2j * np.pi * np.asarray(zeta, dtype=complex)))
    return complex(out) if np.ndim(out) == 0 else out


def exp_inverse(z: complex) -> complex:
    """Branch of Exp^-1(z) with Re in [1/2, 3/2)."""
    if z == 0:
        raise ValueError("0 has no Exp preimage")
    zeta = np.log(-27.0 / 4.0 * np.conj(complex(z))) / (2j * np.pi)
    re = (zeta.real - RE_LEFT) % 1.0 + RE_LEFT
    return complex(re, zeta.imag)


@dataclass
class Sector:
    """Closed boundary of a sector, traced through phi_inverse along its defining edges."""
    kind: SectorKind
    edges: Dict[str, np.ndarray]
    chart: FatouChart = field(repr=False)
    im_range: tuple = (IM_BOTTOM, IM_SPLIT)
    edge_error: float = 0.0

    @property
    def boundary(self) -> np.ndarray:
        return np.concatenate([self.edges[k] for k in ("down", "right", "up", "left")])

    def contains(self, z) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        b = self.boundary
        return points_in_poly(np.column_stack([z.real, z.imag]), np.column_stack([b.real, b.imag]))

    def winding_number(self, z: complex) -> int:
        d = self.boundary - z
        return int(round(float(np.sum(np.angle(np.roll(d, -1) / d))) / (2 * np.pi)))

    def to_frame(self) -> pd.DataFrame:
        b = self.boundary
        return pd.DataFrame({"kind": self.kind.value, "k": np.arange(len(b)), "re": b.real, "im": b.imag})

    def save_csv(self, path: Union[str, Path]) -> Path:
        """CSV with columns kind, k, re, im."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format="%.17g")
        return path

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {"kind": self.kind.value, "points": int(len(self.boundary)), "edge_error": self.edge_error,
                "im_range": list(self.im_range)}


def _trace(chart: FatouChart, ws: np.ndarray, seed) -> List[complex]:
    points = []
    z = seed
    for w in ws:
        z = chart.phi_inverse(complex(w), seed=z)
        points.append(z)
    return points


def sector(chart: FatouChart, kind: Union[SectorKind, str], points: int = 64,
           truncation: float = DEFAULT_TRUNCATION) -> Sector:
    """
    Sector C (1/2 <= Re <= 3/2, -2 <= Im <= 2) or C# (same Re range, Im >= 2, cut at ``truncation``).

    Edges are traced by continuation, each point seeding the next.

    Raises:
        NewtonDivergenceError: an edge point could not be inverted
    """
    kind = SectorKind(kind)
    lo, hi = (IM_BOTTOM, IM_SPLIT) if kind == SectorKind.C else (IM_SPLIT, truncation)
    if hi <= lo:
        raise ValueError("truncation must exceed the C/C# split")
    t = np.linspace(0.0, 1.0, points, endpoint=False)
    down = RE_LEFT + (RE_RIGHT - RE_LEFT) * t + 1j * lo
    right = RE_RIGHT + 1j * (lo + (hi - lo) * t)
    up = RE_RIGHT - (RE_RIGHT - RE_LEFT) * t + 1j * hi
    left = RE_LEFT + 1j * (hi - (hi - lo) * t)

    start = chart.phi_inverse(complex(down[0]))
    edges: Dict[str, np.ndarray] = {}
    seed = start
    for name, ws in (("down", down), ("right", right), ("up", up), ("left", left)):
        pts = _trace(chart, ws, seed)
        edges[name] = np.array(pts)
        seed = pts[-1]

    targets = np.concatenate([down, right, up, left])
    images = np.array([chart.phi(z) for z in np.concatenate([edges[k] for k in ("down", "right", "up", "left")])])
    return Sector(kind, edges, chart, (lo, hi), float(np.max(np.abs(images - targets))))
